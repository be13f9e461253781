#pragma once

// Exact subsets of F_p^n, stored as bitmasks over point codes.  All pure
// counting paths run on these (never on floating-point function values).

#include <vector>

#include "qfa/fp.hpp"

namespace qfa {

class PointSet {
 public:
  PointSet() = default;
  PointSet(int p, int n)
      : p_(p), n_(n), mask_(ipow(static_cast<u64>(p), static_cast<unsigned>(n)), false) {}

  static PointSet of(int p, int n, const std::vector<FpVector>& pts) {
    PointSet s(p, n);
    for (const FpVector& x : pts) s.insert(x);
    return s;
  }

  int p() const { return p_; }
  int ambient_dim() const { return n_; }
  u64 universe_size() const { return mask_.size(); }
  u64 size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool contains_code(u64 code) const { return mask_[code]; }
  bool contains(const FpVector& x) const { return mask_[point_code(x)]; }

  void insert_code(u64 code) {
    if (!mask_[code]) {
      mask_[code] = true;
      ++size_;
    }
  }
  void insert(const FpVector& x) { insert_code(point_code(x)); }

  /// Member points in code (lexicographic) order.
  std::vector<FpVector> points() const {
    std::vector<FpVector> out;
    out.reserve(size_);
    for (u64 c = 0; c < mask_.size(); ++c)
      if (mask_[c]) out.push_back(point_from_code(c, p_, n_));
    return out;
  }

  std::vector<u64> codes() const {
    std::vector<u64> out;
    out.reserve(size_);
    for (u64 c = 0; c < mask_.size(); ++c)
      if (mask_[c]) out.push_back(c);
    return out;
  }

  bool operator==(const PointSet& o) const = default;

 private:
  int p_ = 3;
  int n_ = 0;
  std::vector<bool> mask_;
  u64 size_ = 0;
};

PointSet intersect(const PointSet& a, const PointSet& b);

/// {x : x + shift in A}, i.e. the set A - shift.
PointSet shifted(const PointSet& a, const FpVector& shift);

/// {x : pivot - x in A}, i.e. the set pivot - A.
PointSet reflected(const PointSet& a, const FpVector& pivot);

}  // namespace qfa
