#include "qfa/dense_function.hpp"

#include <cmath>

#include "qfa/parallel.hpp"

namespace qfa {

DenseFunction DenseFunction::constant(const Subspace& domain, cplx value) {
  DenseFunction f(domain);
  for (auto& z : f.v_) z = value;
  return f;
}

DenseFunction DenseFunction::indicator(const Subspace& domain, const PointSet& a) {
  DenseFunction f(domain);
  for (u64 i = 0; i < f.size(); ++i)
    if (a.contains(domain.point_at(i))) f.v_[i] = cplx(1.0, 0.0);
  return f;
}

DenseFunction DenseFunction::delta(const Subspace& domain, const FpVector& at) {
  DenseFunction f(domain);
  if (auto idx = domain.index_of(at)) f.v_[*idx] = cplx(1.0, 0.0);
  return f;
}

DenseFunction DenseFunction::from_values(Subspace domain, std::vector<cplx> values) {
  DenseFunction f(std::move(domain));
  if (values.size() != f.v_.size()) throw BadParams("value array does not match domain size");
  f.v_ = std::move(values);
  return f;
}

cplx DenseFunction::value_at(const FpVector& x) const {
  auto idx = domain_.index_of(x);
  return idx ? v_[*idx] : cplx(0.0, 0.0);
}

bool DenseFunction::is_indicator01() const {
  for (const cplx& z : v_)
    if (!(z == cplx(0.0, 0.0) || z == cplx(1.0, 0.0))) return false;
  return true;
}

double DenseFunction::sup_norm() const {
  double m = 0.0;
  for (const cplx& z : v_) m = std::max(m, std::abs(z));
  return m;
}

double DenseFunction::l2_norm_squared() const {
  std::vector<double> terms(v_.size());
  for (u64 i = 0; i < v_.size(); ++i) terms[i] = std::norm(v_[i]);
  return pairwise_sum(terms);
}

PointSet DenseFunction::support() const {
  PointSet s(domain_.p(), domain_.ambient_dim());
  for (u64 i = 0; i < size(); ++i)
    if (v_[i] != cplx(0.0, 0.0)) s.insert(domain_.point_at(i));
  return s;
}

bool DenseFunction::supported_in(const PointSet& phi) const {
  for (u64 i = 0; i < size(); ++i)
    if (v_[i] != cplx(0.0, 0.0) && !phi.contains(domain_.point_at(i))) return false;
  return true;
}

DenseFunction DenseFunction::pointwise_mul(const DenseFunction& other) const {
  DenseFunction out(domain_);
  for (u64 i = 0; i < size(); ++i) out.v_[i] = v_[i] * other.v_[i];
  return out;
}

}  // namespace qfa
