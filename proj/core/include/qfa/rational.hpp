#pragma once

// Exact rational values (densities, counts per cell).  boost::rational is
// header-only and its comparisons are overflow-safe; numerators and
// denominators here are bounded by |H| <= p^16.

#include <boost/rational.hpp>
#include <string>

namespace qfa {

using Rat = boost::rational<long long>;

inline double to_double(const Rat& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline std::string to_string(const Rat& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace qfa
