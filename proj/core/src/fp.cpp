#include "qfa/fp.hpp"

#include <cmath>
#include <numbers>

namespace qfa {

UnitRoots::UnitRoots(int p) : p_(p) {
  require_prime(p);
  w_.resize(static_cast<size_t>(p));
  for (int k = 0; k < p; ++k) {
    double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(p);
    w_[static_cast<size_t>(k)] = cplx(std::cos(theta), std::sin(theta));
  }
}

}  // namespace qfa
