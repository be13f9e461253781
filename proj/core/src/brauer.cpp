#include "qfa/brauer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qfa/parallel.hpp"

namespace qfa {

namespace {

void require_common_domain(const DenseFunction& a, const DenseFunction& b) {
  if (!(a.domain() == b.domain())) throw BadParams("functions must share a domain");
}

// Coefficient tuples of every domain point, for additive indexing:
// index(x + y) = code(t_x + t_y).
std::vector<FpVector> domain_tuples(const Subspace& h) {
  std::vector<FpVector> out(h.point_count());
  for (u64 i = 0; i < out.size(); ++i) out[i] = point_from_code(i, h.p(), h.dim());
  return out;
}

}  // namespace

cplx count_brauer(const DenseFunction& f0, const DenseFunction& f1, const DenseFunction& f2,
                  const DenseFunction& g, u64 pair_budget, int threads) {
  require_common_domain(f0, f1);
  require_common_domain(f0, f2);
  require_common_domain(f0, g);
  const Subspace& h = f0.domain();
  const u64 n = f0.size();
  if (n * n > pair_budget) throw BudgetExceeded("Brauer double sum");

  if (f0.is_indicator01() && f1.is_indicator01() && f2.is_indicator01() && g.is_indicator01()) {
    // Exact integer path.
    auto as_set = [&](const DenseFunction& f) {
      std::vector<char> ind(n);
      for (u64 i = 0; i < n; ++i) ind[i] = f[i] == cplx(1.0, 0.0) ? 1 : 0;
      return ind;
    };
    std::vector<char> i0 = as_set(f0), i1 = as_set(f1), i2 = as_set(f2), ig = as_set(g);
    std::vector<FpVector> t = domain_tuples(h);
    std::vector<long long> row_counts(n, 0);
    parallel_for(n, threads, [&](size_t xi) {
      if (!i0[xi]) return;
      long long acc = 0;
      for (u64 yi = 0; yi < n; ++yi) {
        if (!ig[yi]) continue;
        u64 xy = point_code(t[xi] + t[yi]);
        if (!i1[xy]) continue;
        u64 xyy = point_code(t[xy] + t[yi]);
        if (i2[xyy]) ++acc;
      }
      row_counts[xi] = acc;
    });
    long long total = 0;
    for (long long v : row_counts) total += v;
    return cplx(static_cast<double>(total), 0.0);
  }

  std::vector<FpVector> t = domain_tuples(h);
  std::vector<cplx> row_sums(n, cplx(0.0, 0.0));
  parallel_for(n, threads, [&](size_t xi) {
    if (f0[xi] == cplx(0.0, 0.0)) return;
    std::vector<cplx> terms(n);
    for (u64 yi = 0; yi < n; ++yi) {
      u64 xy = point_code(t[xi] + t[yi]);
      u64 xyy = point_code(t[xy] + t[yi]);
      terms[yi] = f1[xy] * f2[xyy] * g[yi];
    }
    row_sums[xi] = f0[xi] * pairwise_sum(terms);
  });
  return pairwise_sum(row_sums);
}

long long count_brauer_sets(const PointSet& f0, const PointSet& f1, const PointSet& f2,
                            const PointSet& g, const Subspace& h, u64 pair_budget, int threads) {
  const u64 n = h.point_count();
  if (n * n > pair_budget) throw BudgetExceeded("Brauer double sum");
  std::vector<FpVector> t = domain_tuples(h);
  std::vector<char> i0(n), i1(n), i2(n), ig(n);
  for (u64 i = 0; i < n; ++i) {
    FpVector x = h.point_at(i);
    i0[i] = f0.contains(x);
    i1[i] = f1.contains(x);
    i2[i] = f2.contains(x);
    ig[i] = g.contains(x);
  }
  std::vector<long long> row_counts(n, 0);
  parallel_for(n, threads, [&](size_t xi) {
    if (!i0[xi]) return;
    long long acc = 0;
    for (u64 yi = 0; yi < n; ++yi) {
      if (!ig[yi]) continue;
      u64 xy = point_code(t[xi] + t[yi]);
      if (!i1[xy]) continue;
      u64 xyy = point_code(t[xy] + t[yi]);
      if (i2[xyy]) ++acc;
    }
    row_counts[xi] = acc;
  });
  long long total = 0;
  for (long long v : row_counts) total += v;
  return total;
}

CountingLemmaCheck check_counting_lemma(const QuadTuple& q, const PointSet& a, u64 pair_budget,
                                        int threads) {
  PointSet z0 = zero_level_set(q.homogeneous_part());
  for (const FpVector& x : a.points())
    if (!z0.contains(x)) throw SupportViolation("A must lie in the zero set of the homogeneous part");

  PointSet z = zero_level_set(q);
  CountingLemmaCheck rec;
  rec.count = count_brauer_sets(z, z, z, a, q.domain(), pair_budget, threads);

  long long hsize = static_cast<long long>(q.domain().point_count());
  long long p2d = static_cast<long long>(ipow(static_cast<u64>(q.p()), static_cast<unsigned>(2 * q.d())));
  rec.main_term = Rat(hsize * static_cast<long long>(a.size()), p2d);

  RankCertificate cert = tuple_rank(q);
  rec.rank = cert.rank;
  rec.rank_infinite = cert.infinite;
  double err = std::abs(static_cast<double>(rec.count) - to_double(rec.main_term));
  double scale = cert.infinite ? (err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity())
                               : std::pow(static_cast<double>(q.p()), 0.5 * cert.rank) /
                                     (static_cast<double>(hsize) * static_cast<double>(hsize));
  rec.normalized_error = cert.infinite ? (err == 0.0 ? 0.0 : err) : err * scale;
  return rec;
}

Coloring lower_bound_coloring(int p, int n, int r) {
  require_prime(p);
  if (n > r) throw DimensionTooLarge("lower-bound coloring needs n <= r");
  Coloring c;
  c.p = p;
  c.n = n;
  c.r = r;
  c.colors.resize(c.nonzero_count());
  for (u64 code = 1; code < c.nonzero_count() + 1; ++code) {
    FpVector x = point_from_code(code, p, n);
    int color = 0;
    for (int i = n - 1; i >= 0; --i)
      if (x.c[static_cast<size_t>(i)]) {
        color = i + 1;
        break;
      }
    c.colors[code - 1] = color;
  }
  return c;
}

std::optional<BrauerWitness> find_monochromatic_brauer(const Coloring& c) {
  const u64 total = ipow(static_cast<u64>(c.p), static_cast<unsigned>(c.n));
  for (u64 xc = 1; xc < total; ++xc) {
    FpVector x = point_from_code(xc, c.p, c.n);
    int color = c.color_of_code(xc);
    for (u64 yc = 1; yc < total; ++yc) {
      if (c.color_of_code(yc) != color) continue;
      FpVector y = point_from_code(yc, c.p, c.n);
      FpVector xy = x + y;
      if (xy.is_zero() || c.color_of(xy) != color) continue;
      FpVector xyy = xy + y;
      if (xyy.is_zero() || c.color_of(xyy) != color) continue;
      return BrauerWitness{x, y, color};
    }
  }
  return std::nullopt;
}

PointSet expansion_set(const PointSet& a, const QuadTuple& q, u64 budget) {
  PointSet z = zero_level_set(q);
  const u64 universe = a.universe_size();
  if (z.size() * universe > budget) throw BudgetExceeded("expansion set scan");
  PointSet out(a.p(), a.ambient_dim());
  for (const FpVector& y : z.points()) {
    FpVector y2 = y + y;
    for (u64 xc = 0; xc < universe; ++xc) {
      if (!a.contains_code(xc)) continue;
      FpVector x = point_from_code(xc, a.p(), a.ambient_dim());
      if (a.contains(x + y) && a.contains(x + y2)) {
        out.insert(y);
        break;
      }
    }
  }
  return out;
}

U3ControlRecord check_u3_control(const DenseFunction& f0, const DenseFunction& f1,
                                 const DenseFunction& f2, const DenseFunction& g, const QuadTuple& q,
                                 bool structured_family, u64 pair_budget, u64 u3_budget, int threads) {
  PointSet z = zero_level_set(q);
  PointSet z0 = zero_level_set(q.homogeneous_part());
  const DenseFunction* fs[3] = {&f0, &f1, &f2};
  for (const DenseFunction* f : fs) {
    if (!f->supported_in(z)) throw SupportViolation("supp(f_i) must lie in Q^{-1}(0)");
    if (f->sup_norm() > 1.0 + 1e-12) throw BadParams("f_i must be 1-bounded");
  }
  if (!g.supported_in(z0)) throw SupportViolation("supp(g) must lie in the homogeneous zero set");
  if (g.sup_norm() > 1.0 + 1e-12) throw BadParams("g must be 1-bounded");

  const Subspace& h = f0.domain();
  DenseFunction iz = DenseFunction::indicator(h, z);
  DenseFunction iz0 = DenseFunction::indicator(h, z0);

  U3ControlRecord rec;
  rec.weighted_count_abs = std::abs(count_brauer(f0, f1, f2, g, pair_budget, threads));
  rec.indicator_count = count_brauer(iz, iz, iz, iz0, pair_budget, threads).real();
  rec.eta = rec.indicator_count > 0.0 ? rec.weighted_count_abs / rec.indicator_count : 0.0;

  double base = u3_norm(iz, u3_budget, threads);
  for (int i = 0; i < 3; ++i)
    rec.ratios[i] = base > 0.0 ? u3_norm(*fs[i], u3_budget, threads) / base : 0.0;

  if (structured_family) {
    double min_ratio = std::min({rec.ratios[0], rec.ratios[1], rec.ratios[2]});
    if (min_ratio + 1e-9 < rec.eta / 4.0)
      throw CheckFailed("U^3 control on the structured family: min ratio < eta/4");
    rec.structured_assert = true;
  }
  return rec;
}

}  // namespace qfa
