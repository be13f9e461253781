#include "qfa/quadratic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qfa/parallel.hpp"
#include "qfa/rng.hpp"

namespace qfa {

QuadraticPoly::QuadraticPoly(FpMatrix b_, LinearForm l_, int c_)
    : b(std::move(b_)), l(std::move(l_)), c(fp_reduce(c_, b.p)) {
  if (b.rows != b.cols) throw BadParams("bilinear part must be square");
  if (!b.is_symmetric()) throw BadParams("bilinear part must be symmetric (symmetrize first)");
  if (l.dim() != b.rows) throw BadParams("linear part dimension mismatch");
}

QuadraticPoly QuadraticPoly::zero(int p, int n) {
  return QuadraticPoly(FpMatrix(p, n, n), LinearForm::zero(p, n), 0);
}

QuadraticPoly QuadraticPoly::homogeneous(FpMatrix b) {
  int p = b.p;
  int n = b.rows;
  return QuadraticPoly(std::move(b), LinearForm::zero(p, n), 0);
}

int QuadraticPoly::eval(const FpVector& x) const {
  return (quad_value(b, x) + l.eval(x) + c) % b.p;
}

QuadTuple::QuadTuple(Subspace domain, std::vector<QuadraticPoly> polys)
    : domain_(std::move(domain)), polys_(std::move(polys)) {
  if (domain_.has_offset()) throw BadParams("tuple domain must be offset-free");
  for (const auto& q : polys_) {
    if (q.p() != domain_.p() || q.ambient_dim() != domain_.ambient_dim())
      throw BadParams("tuple polynomials must share the domain's ambient space");
  }
}

std::vector<int> QuadTuple::eval(const FpVector& x) const {
  std::vector<int> out(polys_.size());
  for (size_t i = 0; i < polys_.size(); ++i) out[i] = polys_[i].eval(x);
  return out;
}

bool QuadTuple::is_homogeneous() const {
  return std::all_of(polys_.begin(), polys_.end(), [](const QuadraticPoly& q) { return q.is_homogeneous(); });
}

QuadTuple QuadTuple::homogeneous_part() const {
  std::vector<QuadraticPoly> hs;
  hs.reserve(polys_.size());
  for (const auto& q : polys_) hs.push_back(q.homogeneous_part());
  return QuadTuple(domain_, std::move(hs));
}

QuadTuple QuadTuple::appended(const QuadraticPoly& q) const {
  std::vector<QuadraticPoly> ps = polys_;
  ps.push_back(q);
  return QuadTuple(domain_, std::move(ps));
}

QuadTuple QuadTuple::prefix(int k) const {
  std::vector<QuadraticPoly> ps(polys_.begin(), polys_.begin() + k);
  return QuadTuple(domain_, std::move(ps));
}

QuadTuple QuadTuple::with_domain(Subspace h) const {
  return QuadTuple(std::move(h), polys_);
}

namespace {

// Matrix of the bilinear form restricted to the subspace basis:
// (E B E^T)_{ij} = b(e_i, e_j).
FpMatrix restrict_bilinear(const FpMatrix& b, const Subspace& v) {
  FpMatrix e = v.basis();
  return mat_mul(mat_mul(e, b), transpose(e));
}

}  // namespace

LinearForm bilinear_row_form(const FpMatrix& b, const FpVector& u) {
  LinearForm f = LinearForm::zero(b.p, b.cols);
  for (int j = 0; j < b.cols; ++j) {
    int s = 0;
    for (int i = 0; i < b.rows; ++i) s += u.c[static_cast<size_t>(i)] * b.at(i, j);
    f.a[static_cast<size_t>(j)] = static_cast<u8>(s % b.p);
  }
  return f;
}

RankCertificate tuple_rank(const QuadTuple& q, u64 lambda_budget) {
  RankCertificate cert;
  if (q.d() == 0) {
    cert.infinite = true;
    return cert;
  }
  const int p = q.p();
  const int d = q.d();
  u64 total = ipow(static_cast<u64>(p), static_cast<unsigned>(d));
  if (total > lambda_budget) throw BudgetExceeded("tuple rank lambda search");

  std::vector<FpMatrix> restricted;
  restricted.reserve(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) restricted.push_back(restrict_bilinear(q.poly(i).b, q.domain()));
  const int m = q.domain().dim();

  cert.rank = m + 1;  // above any achievable rank
  for (u64 code = 1; code < total; ++code) {
    FpVector lambda = point_from_code(code, p, d);
    // Projective representatives only: first nonzero coordinate equals 1.
    int lead = 0;
    while (lambda.c[static_cast<size_t>(lead)] == 0) ++lead;
    if (lambda.c[static_cast<size_t>(lead)] != 1) continue;
    FpMatrix combo(p, m, m);
    for (int i = 0; i < d; ++i) {
      int li = lambda.c[static_cast<size_t>(i)];
      if (!li) continue;
      for (size_t t = 0; t < combo.e.size(); ++t)
        combo.e[t] = static_cast<u8>((combo.e[t] + li * restricted[static_cast<size_t>(i)].e[t]) % p);
    }
    int r = rank(combo);
    if (r < cert.rank) {
      cert.rank = r;
      cert.lambda = lambda.c;
    }
  }
  return cert;
}

QuadTuple restrict_tuple(const QuadTuple& q, const Subspace& v) {
  if (v.has_offset()) throw BadParams("restriction target must be offset-free");
  for (int i = 0; i < v.dim(); ++i)
    if (!q.domain().contains(v.basis_vector(i))) throw BadParams("V must be a subspace of the tuple domain");

  const int p = q.p();
  const int m = v.dim();
  FpMatrix e = v.basis();
  std::vector<QuadraticPoly> polys;
  polys.reserve(static_cast<size_t>(q.d()));
  for (int i = 0; i < q.d(); ++i) {
    const QuadraticPoly& src = q.poly(i);
    FpMatrix b2 = restrict_bilinear(src.b, v);
    LinearForm l2 = LinearForm::zero(p, m);
    for (int j = 0; j < m; ++j) l2.a[static_cast<size_t>(j)] = static_cast<u8>(src.l.eval(v.basis_vector(j)));
    polys.emplace_back(std::move(b2), std::move(l2), src.c);
  }
  QuadTuple out(Subspace::full(p, m), std::move(polys));

  RankCertificate before = tuple_rank(q);
  RankCertificate after = tuple_rank(out);
  int codim_in_domain = q.domain().dim() - v.dim();
  if (!before.infinite && !after.infinite && after.rank < before.rank - 2 * codim_in_domain)
    throw CheckFailed("rank decrement exceeded 2*codim on restriction");
  return out;
}

PointSet level_set(const QuadTuple& q, const std::vector<int>& a, u64 budget) {
  if (a.size() != static_cast<size_t>(q.d())) throw BadParams("level value has wrong length");
  if (q.domain().point_count() > budget) throw BudgetExceeded("level set enumeration");
  PointSet out(q.p(), q.ambient_dim());
  const u64 n = q.domain().point_count();
  for (u64 i = 0; i < n; ++i) {
    FpVector x = q.domain().point_at(i);
    if (q.eval(x) == a) out.insert(x);
  }
  return out;
}

WeylSum weyl_sum(const QuadraticPoly& q, const Subspace& coset) {
  UnitRoots w(q.p());
  const u64 n = coset.point_count();
  std::vector<cplx> terms(n);
  for (u64 i = 0; i < n; ++i) terms[i] = w(q.eval(coset.point_at(i)));
  WeylSum out;
  out.value = pairwise_sum(terms);
  out.rank = rank(q.b);
  int codim = coset.ambient_dim() - coset.dim();
  out.bound = static_cast<double>(n) *
              std::pow(static_cast<double>(q.p()), static_cast<double>(codim) - 0.5 * out.rank);
  if (std::abs(out.value) > out.bound + 1e-9) throw CheckFailed("Weyl bound violated");
  return out;
}

DifferencedSet differenced_set(const QuadTuple& q, const std::vector<FpVector>& us,
                               const std::vector<FpVector>& vs, u64 budget) {
  PointSet z = zero_level_set(q, budget);
  PointSet phi = z;
  for (const FpVector& u : us) phi = intersect(phi, shifted(z, u));
  for (const FpVector& v : vs) phi = intersect(phi, reflected(z, v));

  std::vector<LinearForm> forms;
  for (const FpVector& u : us)
    for (int k = 0; k < q.d(); ++k) forms.push_back(bilinear_row_form(q.poly(k).b, u));
  for (const FpVector& v : vs)
    for (int k = 0; k < q.d(); ++k) forms.push_back(bilinear_row_form(q.poly(k).b, v) + q.poly(k).l);
  Subspace vsub = kernel(forms, q.domain());

  DifferencedSet out{phi, vsub, true};
  // The set identity must hold for every base point of Phi.
  for (const FpVector& x0 : phi.points()) {
    PointSet via_formula(q.p(), q.ambient_dim());
    for (const FpVector& x : z.points())
      if (vsub.contains(x - x0)) via_formula.insert(x);
    if (!(via_formula == phi)) {
      out.identity_checked = false;
      throw CheckFailed("differenced level set identity");
    }
  }
  return out;
}

namespace {

// exceptional * p^{max(0, R-kd)} <= |H|^k * p^{max(0, kd-R)}, exactly.
bool census_within_cap(u64 exceptional, u64 h_pow_k, int p, int kd, int rank_val, bool rank_infinite) {
  if (rank_infinite) return exceptional == 0;
  __int128 lhs = exceptional;
  __int128 rhs = h_pow_k;
  int diff = rank_val - kd;
  if (diff > 0)
    for (int i = 0; i < diff; ++i) lhs *= p;
  else
    for (int i = 0; i < -diff; ++i) rhs *= p;
  return lhs <= rhs;
}

std::string cap_string(u64 h_pow_k, int p, int kd, int rank_val, bool rank_infinite) {
  if (rank_infinite) return "0";
  return std::to_string(h_pow_k) + " * " + std::to_string(p) + "^" + std::to_string(kd - rank_val);
}

}  // namespace

CensusRecord generic_codim_census(const QuadTuple& b, const std::vector<std::vector<LinearForm>>& ls,
                                  int k, u64 budget) {
  if (static_cast<int>(ls.size()) != k) throw BadParams("need one d-tuple of forms per h index");
  const int d = b.d();
  const Subspace& h = b.domain();
  const int m = h.dim();
  const u64 hsize = h.point_count();
  u64 population = 1;
  for (int i = 0; i < k; ++i) {
    if (population > budget / hsize + 1) throw BudgetExceeded("generic codimension census");
    population *= hsize;
  }
  if (population > budget) throw BudgetExceeded("generic codimension census");

  RankCertificate cert = tuple_rank(b);

  // Precompute the restriction of each candidate form to H's coordinates.
  std::vector<FpVector> hpoints = h.enumerate_points();
  std::vector<char> exceptional_flags(population, 0);
  parallel_for(population, 0, [&](size_t tuple_idx) {
    // Decode the k h-indices (big-endian base |H|).
    u64 rest = tuple_idx;
    std::vector<u64> hidx(static_cast<size_t>(k));
    for (int j = k - 1; j >= 0; --j) {
      hidx[static_cast<size_t>(j)] = rest % hsize;
      rest /= hsize;
    }
    FpMatrix sys(b.p(), k * d, m);
    for (int j = 0; j < k; ++j) {
      const FpVector& hj = hpoints[hidx[static_cast<size_t>(j)]];
      for (int i = 0; i < d; ++i) {
        LinearForm f = bilinear_row_form(b.poly(i).b, hj) + ls[static_cast<size_t>(j)][static_cast<size_t>(i)];
        for (int col = 0; col < m; ++col)
          sys.set(j * d + i, col, f.eval(h.basis_vector(col)));
      }
    }
    if (rank(sys) != k * d) exceptional_flags[tuple_idx] = 1;
  });

  CensusRecord rec;
  rec.population = population;
  for (char f : exceptional_flags) rec.exceptional += static_cast<u64>(f);
  rec.within_cap = census_within_cap(rec.exceptional, population, b.p(), k * d, cert.rank, cert.infinite);
  rec.cap = cap_string(population, b.p(), k * d, cert.rank, cert.infinite);
  if (!rec.within_cap) throw CheckFailed("generic differenced subspace census exceeded its cap");
  return rec;
}

CosetUniformityCheck check_coset_uniformity(const QuadTuple& q, const Subspace& v, const FpVector& h,
                                            const LinearForm& ell) {
  UnitRoots w(q.p());
  PointSet z = zero_level_set(q);
  CosetUniformityCheck rec;

  std::vector<cplx> terms;
  Subspace coset = Subspace::coset(v, h);
  for (u64 i = 0; i < coset.point_count(); ++i) {
    FpVector x = coset.point_at(i);
    if (z.contains(x)) terms.push_back(w(ell.eval(x)));
  }
  rec.sum = terms.empty() ? cplx(0.0, 0.0) : pairwise_sum(terms);

  bool in_perp = true;
  for (int i = 0; i < v.dim() && in_perp; ++i)
    if (ell.eval(v.basis_vector(i)) != 0) in_perp = false;
  double vsize = static_cast<double>(v.point_count());
  double pd = std::pow(static_cast<double>(q.p()), static_cast<double>(q.d()));
  rec.main_term = in_perp ? w(ell.eval(h)) * (vsize / pd) : cplx(0.0, 0.0);

  RankCertificate cert = tuple_rank(q);
  double hsize = static_cast<double>(q.domain().point_count());
  rec.bound = cert.infinite
                  ? 0.0
                  : hsize * std::pow(static_cast<double>(q.p()), -0.5 * cert.rank);
  rec.error = std::abs(rec.sum - rec.main_term);
  rec.vacuous = rec.bound >= vsize;
  rec.pass = rec.error <= rec.bound + 1e-9;
  if (!rec.pass) throw CheckFailed("coset uniformity estimate violated");
  return rec;
}

namespace {

// Membership bitmask for the row space of the given covectors (in an
// m-dimensional coordinate space).
std::vector<bool> span_mask(const std::vector<LinearForm>& forms, int p, int m) {
  std::vector<FpVector> rows;
  rows.reserve(forms.size());
  for (const auto& f : forms) rows.emplace_back(p, f.a);
  FpMatrix basis = rref(FpMatrix::from_rows(p, rows));
  if (basis.cols == 0) basis = FpMatrix(p, 0, m);
  u64 count = ipow(static_cast<u64>(p), static_cast<unsigned>(basis.rows));
  std::vector<bool> mask(ipow(static_cast<u64>(p), static_cast<unsigned>(m)), false);
  for (u64 code = 0; code < count; ++code) {
    FpVector t = point_from_code(code, p, basis.rows);
    FpVector x = FpVector::zero(p, m);
    for (int i = 0; i < basis.rows; ++i)
      if (t.c[static_cast<size_t>(i)]) x = x + (t.c[static_cast<size_t>(i)] * basis.row(i));
    mask[point_code(x)] = true;
  }
  return mask;
}

}  // namespace

DifferencedCensus differenced_uniformity_census(const QuadTuple& q, u64 triple_samples, u64 seed,
                                                u64 budget, int threads) {
  // Work in the coordinates of the domain so the universe is a full space.
  QuadTuple qr = q.domain().dim() == q.ambient_dim() ? q : restrict_tuple(q, q.domain());
  const int p = qr.p();
  const int m = qr.ambient_dim();
  const int d = qr.d();
  const u64 hsize = ipow(static_cast<u64>(p), static_cast<unsigned>(m));
  if (hsize * hsize > budget) throw BudgetExceeded("differenced uniformity census");

  UnitRoots w(p);
  PointSet z = zero_level_set(qr);
  RankCertificate cert = tuple_rank(qr);
  const double err_bound =
      cert.infinite ? 0.0 : static_cast<double>(hsize) * std::pow(static_cast<double>(p), -0.5 * cert.rank);

  std::vector<FpVector> pts(hsize);
  for (u64 i = 0; i < hsize; ++i) pts[i] = point_from_code(i, p, m);

  // Character sum of a set of codes against every covector, minus a main
  // term supported on a span; returns true when every covector passes.
  auto sweep = [&](const std::vector<u64>& member_codes, u64 base_code,
                   const std::vector<bool>& span, double main_value, double bound) {
    for (u64 lc = 0; lc < hsize; ++lc) {
      const FpVector& lv = pts[lc];
      std::vector<cplx> terms;
      terms.reserve(member_codes.size());
      for (u64 xc : member_codes) {
        int phase = 0;
        for (int i = 0; i < m; ++i)
          phase += lv.c[static_cast<size_t>(i)] *
                   ((pts[xc].c[static_cast<size_t>(i)] + p - pts[base_code].c[static_cast<size_t>(i)]) % p);
        terms.push_back(w(phase));
      }
      cplx s = terms.empty() ? cplx(0.0, 0.0) : pairwise_sum(terms);
      cplx main = span[lc] ? cplx(main_value, 0.0) : cplx(0.0, 0.0);
      if (std::abs(s - main) > bound + 1e-9) return false;
    }
    return true;
  };

  DifferencedCensus out;

  // Once-differenced: exhaustive over h.
  const double once_main = static_cast<double>(hsize) * std::pow(static_cast<double>(p), -2.0 * d);
  std::vector<char> once_flags(hsize, 0);
  parallel_for(hsize, threads, [&](size_t hc) {
    const FpVector& h = pts[hc];
    PointSet phi = intersect(z, shifted(z, h));
    PointSet psi = intersect(z, reflected(z, h));
    std::vector<LinearForm> phi_forms, psi_forms;
    for (int i = 0; i < d; ++i) {
      LinearForm hb = bilinear_row_form(qr.poly(i).b, h);
      phi_forms.push_back(hb);
      psi_forms.push_back(hb + qr.poly(i).l);
    }
    std::vector<bool> phi_span = span_mask(phi_forms, p, m);
    std::vector<bool> psi_span = span_mask(psi_forms, p, m);
    std::vector<u64> phi_codes = phi.codes();
    std::vector<u64> psi_codes = psi.codes();
    u64 x0 = phi_codes.empty() ? 0 : phi_codes.front();
    u64 y0 = psi_codes.empty() ? 0 : psi_codes.front();
    bool ok = sweep(phi_codes, x0, phi_span, once_main, err_bound) &&
              sweep(psi_codes, y0, psi_span, once_main, err_bound);
    once_flags[hc] = ok ? 0 : 1;
  });
  out.once.population = hsize;
  for (char f : once_flags) out.once.exceptional += static_cast<u64>(f);
  out.once.within_cap = census_within_cap(out.once.exceptional, hsize, p, d, cert.rank, cert.infinite);
  out.once.cap = cap_string(hsize, p, d, cert.rank, cert.infinite);

  // Thrice-differenced: sampled triples (exhaustive when triple_samples == 0
  // and the budget allows).
  u64 triple_population = hsize * hsize * hsize;
  std::vector<u64> triple_codes;
  bool sampled = !(triple_samples == 0 && triple_population <= budget);
  if (sampled) {
    if (triple_samples == 0) triple_samples = 200;
    SplitMix64 rng(seed);
    triple_codes.reserve(triple_samples);
    for (u64 i = 0; i < triple_samples; ++i)
      triple_codes.push_back(rng.uniform_below(triple_population));
  } else {
    triple_codes.resize(triple_population);
    for (u64 i = 0; i < triple_population; ++i) triple_codes[i] = i;
  }

  const double thrice_main = static_cast<double>(hsize) * std::pow(static_cast<double>(p), -4.0 * d);
  const double displayed_bound =
      cert.infinite ? 0.0 : static_cast<double>(hsize) * std::pow(static_cast<double>(p), 0.5 * cert.rank);
  std::vector<char> strict_flags(triple_codes.size(), 0);
  std::vector<char> displayed_flags(triple_codes.size(), 0);
  parallel_for(triple_codes.size(), threads, [&](size_t idx) {
    u64 code = triple_codes[idx];
    u64 h3 = code % hsize;
    u64 h2 = (code / hsize) % hsize;
    u64 h1 = code / (hsize * hsize);
    std::vector<LinearForm> forms;
    for (u64 hc : {h1, h2, h3})
      for (int i = 0; i < d; ++i) forms.push_back(bilinear_row_form(qr.poly(i).b, pts[hc]));
    // V_{h1,h2,h3} = common kernel of the forms; Phi = Z cap (V + 0).
    Subspace vsub = kernel(forms, Subspace::full(p, m));
    std::vector<u64> member_codes;
    for (u64 xc : z.codes())
      if (vsub.contains(pts[xc])) member_codes.push_back(xc);
    std::vector<bool> span = span_mask(forms, p, m);
    if (!sweep(member_codes, 0, span, thrice_main, err_bound)) strict_flags[idx] = 1;
    if (!sweep(member_codes, 0, span, thrice_main, displayed_bound)) displayed_flags[idx] = 1;
  });
  out.thrice.population = triple_codes.size();
  out.thrice.sampled = sampled;
  for (char f : strict_flags) out.thrice.exceptional += static_cast<u64>(f);
  for (char f : displayed_flags) out.thrice_exceptional_displayed += static_cast<u64>(f);
  // Cap comparison: exceptional fraction of the sample against the
  // population cap fraction p^{3d - R}.
  if (cert.infinite) {
    out.thrice.within_cap = out.thrice.exceptional == 0;
    out.thrice.cap = "0";
  } else {
    __int128 lhs = out.thrice.exceptional;
    __int128 rhs = out.thrice.population;
    int diff = cert.rank - 3 * d;
    if (diff > 0)
      for (int i = 0; i < diff; ++i) lhs *= p;
    else
      for (int i = 0; i < -diff; ++i) rhs *= p;
    out.thrice.within_cap = lhs <= rhs;
    out.thrice.cap = std::to_string(static_cast<unsigned long long>(out.thrice.population)) + " * " +
                     std::to_string(p) + "^" + std::to_string(3 * d - cert.rank);
  }
  return out;
}

}  // namespace qfa
