#include "qfa/subspace.hpp"

#include <algorithm>

namespace qfa {

void Subspace::recompute_pivots() {
  pivots_.clear();
  for (int i = 0; i < basis_.rows; ++i)
    for (int j = 0; j < basis_.cols; ++j)
      if (basis_.at(i, j)) {
        pivots_.push_back(j);
        break;
      }
}

void Subspace::canonicalize_offset() {
  // Subtract basis rows so the offset vanishes on all pivot coordinates.
  for (size_t i = 0; i < pivots_.size(); ++i) {
    int c = offset_.c[static_cast<size_t>(pivots_[i])];
    if (!c) continue;
    offset_ = offset_ - (c * basis_.row(static_cast<int>(i)));
  }
}

Subspace Subspace::full(int p, int n) {
  require_prime(p);
  Subspace s;
  s.p_ = p;
  s.ambient_ = n;
  s.basis_ = FpMatrix::identity(p, n);
  s.offset_ = FpVector::zero(p, n);
  s.recompute_pivots();
  return s;
}

Subspace Subspace::zero_space(int p, int n) {
  require_prime(p);
  Subspace s;
  s.p_ = p;
  s.ambient_ = n;
  s.basis_ = FpMatrix(p, 0, n);
  s.offset_ = FpVector::zero(p, n);
  return s;
}

Subspace Subspace::span(int p, int n, const std::vector<FpVector>& generators) {
  require_prime(p);
  Subspace s;
  s.p_ = p;
  s.ambient_ = n;
  s.basis_ = rref(FpMatrix::from_rows(p, generators));
  if (s.basis_.cols == 0) s.basis_ = FpMatrix(p, 0, n);
  s.offset_ = FpVector::zero(p, n);
  s.recompute_pivots();
  return s;
}

Subspace Subspace::coset(const Subspace& base, const FpVector& offset) {
  Subspace s = base.linear_part();
  s.offset_ = offset;
  s.canonicalize_offset();
  return s;
}

FpVector Subspace::point_at(u64 index) const {
  FpVector t = point_from_code(index, p_, dim());
  FpVector x = offset_;
  for (int i = 0; i < dim(); ++i)
    if (t.c[static_cast<size_t>(i)]) x = x + (t.c[static_cast<size_t>(i)] * basis_.row(i));
  return x;
}

std::vector<FpVector> Subspace::enumerate_points(u64 budget) const {
  u64 count = point_count();
  if (count > budget) throw BudgetExceeded("subspace enumeration");
  std::vector<FpVector> pts;
  pts.reserve(count);
  for (u64 i = 0; i < count; ++i) pts.push_back(point_at(i));
  return pts;
}

FpVector Subspace::coefficients_of(const FpVector& x) const {
  FpVector rel = x - offset_;
  FpVector t = FpVector::zero(p_, dim());
  for (int i = 0; i < dim(); ++i)
    t.c[static_cast<size_t>(i)] = rel.c[static_cast<size_t>(pivots_[static_cast<size_t>(i)])];
  return t;
}

bool Subspace::contains(const FpVector& x) const {
  FpVector t = coefficients_of(x);
  FpVector y = offset_;
  for (int i = 0; i < dim(); ++i)
    if (t.c[static_cast<size_t>(i)]) y = y + (t.c[static_cast<size_t>(i)] * basis_.row(i));
  return y == x;
}

std::optional<u64> Subspace::index_of(const FpVector& x) const {
  if (!contains(x)) return std::nullopt;
  return point_code(coefficients_of(x));
}

Subspace Subspace::linear_part() const {
  Subspace s = *this;
  s.offset_ = FpVector::zero(p_, ambient_);
  return s;
}

Subspace Subspace::annihilator() const {
  // Covectors vanishing on the basis = right kernel of the basis matrix.
  FpMatrix k = kernel_basis(basis_);
  std::vector<FpVector> gens;
  for (int i = 0; i < k.rows; ++i) gens.push_back(k.row(i));
  return Subspace::span(p_, ambient_, gens);
}

Subspace Subspace::intersect(const Subspace& a, const Subspace& b) {
  // (A cap B) = (A^perp + B^perp)^perp.
  Subspace pa = a.annihilator();
  Subspace pb = b.annihilator();
  std::vector<FpVector> gens;
  for (int i = 0; i < pa.dim(); ++i) gens.push_back(pa.basis_vector(i));
  for (int i = 0; i < pb.dim(); ++i) gens.push_back(pb.basis_vector(i));
  Subspace sum = Subspace::span(a.p(), a.ambient_dim(), gens);
  return sum.annihilator();
}

std::vector<FpVector> Subspace::coset_reps(const Subspace& k) const {
  // Representatives are spanned by the basis vectors of this subspace that
  // are independent from K; the zero representative comes first.
  std::vector<FpVector> complement;
  Subspace acc = k.linear_part();
  for (int i = 0; i < dim(); ++i) {
    FpVector v = basis_vector(i);
    if (acc.contains(v)) continue;
    complement.push_back(v);
    std::vector<FpVector> gens = complement;
    for (int j = 0; j < k.dim(); ++j) gens.push_back(k.basis_vector(j));
    acc = Subspace::span(p_, ambient_, gens);
  }
  u64 count = ipow(static_cast<u64>(p_), static_cast<unsigned>(complement.size()));
  std::vector<FpVector> reps;
  reps.reserve(count);
  for (u64 code = 0; code < count; ++code) {
    FpVector t = point_from_code(code, p_, static_cast<int>(complement.size()));
    FpVector r = FpVector::zero(p_, ambient_);
    for (size_t i = 0; i < complement.size(); ++i)
      if (t.c[i]) r = r + (t.c[i] * complement[i]);
    reps.push_back(r);
  }
  return reps;
}

LinearForm lift_covector(const LinearForm& cov, const Subspace& h) {
  LinearForm out = LinearForm::zero(h.p(), h.ambient_dim());
  for (int i = 0; i < h.dim(); ++i)
    out.a[static_cast<size_t>(h.pivots()[static_cast<size_t>(i)])] = cov.a[static_cast<size_t>(i)];
  return out;
}

Subspace kernel(const std::vector<LinearForm>& forms, const Subspace& v) {
  // Express each form in V's coordinates: row_j = (ell(b_1), ..., ell(b_m)),
  // find the kernel there, and map back through the basis.
  int m = v.dim();
  FpMatrix sys(v.p(), static_cast<int>(forms.size()), m);
  for (size_t i = 0; i < forms.size(); ++i)
    for (int j = 0; j < m; ++j) sys.set(static_cast<int>(i), j, forms[i].eval(v.basis_vector(j)));
  FpMatrix knl = kernel_basis(sys);
  std::vector<FpVector> gens;
  for (int i = 0; i < knl.rows; ++i) {
    FpVector t = knl.row(i);
    FpVector x = FpVector::zero(v.p(), v.ambient_dim());
    for (int j = 0; j < m; ++j)
      if (t.c[static_cast<size_t>(j)]) x = x + (t.c[static_cast<size_t>(j)] * v.basis_vector(j));
    gens.push_back(x);
  }
  return Subspace::span(v.p(), v.ambient_dim(), gens);
}

}  // namespace qfa
