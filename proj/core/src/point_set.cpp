#include "qfa/point_set.hpp"

namespace qfa {

PointSet intersect(const PointSet& a, const PointSet& b) {
  PointSet out(a.p(), a.ambient_dim());
  for (u64 c = 0; c < a.universe_size(); ++c)
    if (a.contains_code(c) && b.contains_code(c)) out.insert_code(c);
  return out;
}

PointSet shifted(const PointSet& a, const FpVector& shift) {
  PointSet out(a.p(), a.ambient_dim());
  for (u64 c = 0; c < a.universe_size(); ++c) {
    FpVector x = point_from_code(c, a.p(), a.ambient_dim());
    if (a.contains(x + shift)) out.insert_code(c);
  }
  return out;
}

PointSet reflected(const PointSet& a, const FpVector& pivot) {
  PointSet out(a.p(), a.ambient_dim());
  for (u64 c = 0; c < a.universe_size(); ++c) {
    FpVector x = point_from_code(c, a.p(), a.ambient_dim());
    if (a.contains(pivot - x)) out.insert_code(c);
  }
  return out;
}

}  // namespace qfa
