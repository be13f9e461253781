#pragma once

// Complex-valued functions on a subspace (or coset) H, stored densely in
// point-enumeration order.  Immutable after construction; norms and
// transforms live in harmonic.hpp.

#include <complex>
#include <vector>

#include "qfa/point_set.hpp"
#include "qfa/subspace.hpp"

namespace qfa {

class DenseFunction {
 public:
  explicit DenseFunction(Subspace domain)
      : domain_(std::move(domain)), v_(domain_.point_count(), cplx(0.0, 0.0)) {}

  static DenseFunction constant(const Subspace& domain, cplx value);
  /// Indicator of A intersected with the domain.
  static DenseFunction indicator(const Subspace& domain, const PointSet& a);
  /// Kronecker delta at a point of the domain.
  static DenseFunction delta(const Subspace& domain, const FpVector& at);
  static DenseFunction from_values(Subspace domain, std::vector<cplx> values);

  const Subspace& domain() const { return domain_; }
  u64 size() const { return v_.size(); }
  cplx operator[](u64 i) const { return v_[i]; }
  const std::vector<cplx>& values() const { return v_; }

  /// Value at an ambient point (0 outside the domain).
  cplx value_at(const FpVector& x) const;

  bool is_indicator01() const;        // every value exactly 0 or 1
  double sup_norm() const;            // max |f(x)|
  double l2_norm_squared() const;     // sum |f(x)|^2
  PointSet support() const;           // ambient codes with f(x) != 0
  bool supported_in(const PointSet& phi) const;

  DenseFunction pointwise_mul(const DenseFunction& other) const;

 private:
  Subspace domain_;
  std::vector<cplx> v_;
};

}  // namespace qfa
