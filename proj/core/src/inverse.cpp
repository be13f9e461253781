#include "qfa/inverse.hpp"

#include <algorithm>
#include <cmath>

#include "qfa/parallel.hpp"
#include "qfa/rng.hpp"

namespace qfa {

double u3_relative_ratio(const DenseFunction& f, const QuadTuple& q, u64 u3_budget, int threads) {
  PointSet z = zero_level_set(q);
  if (z.empty()) throw EmptyLevelSet();
  if (!f.supported_in(z)) throw SupportViolation("supp(f) must lie in Q^{-1}(0)");
  DenseFunction ind = DenseFunction::indicator(f.domain(), z);
  double denom = u3_norm(ind, u3_budget, threads);
  return u3_norm(f, u3_budget, threads) / denom;
}

namespace {

// Coordinates of a constant-free quadratic: upper triangle of the
// symmetric part (row-major, diagonal included) followed by the linear
// coefficients.  The map to functions is linear, so candidates can be
// deduplicated modulo the span of Q's coordinates by zeroing pivot
// positions.
struct QuadCoords {
  int p, n, tri, dim;

  explicit QuadCoords(int p_, int n_) : p(p_), n(n_), tri(n_ * (n_ + 1) / 2), dim(tri + n_) {}

  FpVector pack(const QuadraticPoly& q) const {
    FpVector v = FpVector::zero(p, dim);
    int idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) v.c[static_cast<size_t>(idx++)] = static_cast<u8>(q.b.at(i, j));
    for (int i = 0; i < n; ++i) v.c[static_cast<size_t>(idx++)] = q.l.a[static_cast<size_t>(i)];
    return v;
  }

  QuadraticPoly unpack(const FpVector& v) const {
    FpMatrix b(p, n, n);
    int idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        int val = v.c[static_cast<size_t>(idx++)];
        b.set(i, j, val);
        b.set(j, i, val);
      }
    LinearForm l = LinearForm::zero(p, n);
    for (int i = 0; i < n; ++i) l.a[static_cast<size_t>(i)] = v.c[static_cast<size_t>(idx++)];
    return QuadraticPoly(std::move(b), std::move(l), 0);
  }
};

}  // namespace

InverseVerdict quadratic_witness_search(const DenseFunction& f, const QuadTuple& q,
                                        const WitnessSearchConfig& config) {
  const int p = q.p();
  const int n = q.ambient_dim();
  PointSet z = zero_level_set(q);
  if (z.empty()) throw EmptyLevelSet();

  InverseVerdict verdict;
  verdict.level_set_size = z.size();
  verdict.eta = u3_relative_ratio(f, q, config.u3_budget, config.threads);
  verdict.low_rank = low_rank_certificate(q, config.rank_cutoff);

  QuadCoords coords(p, n);
  // Free positions: coordinates outside the pivot set of span{Q's coords}.
  std::vector<FpVector> span_rows;
  for (const QuadraticPoly& qi : q.polys()) span_rows.push_back(coords.pack(qi));
  FpMatrix span = rref(FpMatrix::from_rows(p, span_rows));
  if (span.cols == 0) span = FpMatrix(p, 0, coords.dim);
  std::vector<char> is_pivot(static_cast<size_t>(coords.dim), 0);
  for (int i = 0; i < span.rows; ++i)
    for (int j = 0; j < span.cols; ++j)
      if (span.at(i, j)) {
        is_pivot[static_cast<size_t>(j)] = 1;
        break;
      }
  std::vector<int> free_pos;
  for (int j = 0; j < coords.dim; ++j)
    if (!is_pivot[static_cast<size_t>(j)]) free_pos.push_back(j);

  u64 total = ipow(static_cast<u64>(p), static_cast<unsigned>(free_pos.size()));
  bool exhaustive = config.exhaustive && total <= config.candidate_budget;
  u64 examined = exhaustive ? total : std::min<u64>(config.sample_count, config.candidate_budget);
  verdict.exhaustive = exhaustive;
  verdict.candidates_examined = examined;

  // Values of f on its support, with the support points themselves.
  std::vector<FpVector> supp_pts;
  std::vector<cplx> supp_vals;
  for (u64 i = 0; i < f.size(); ++i)
    if (f[i] != cplx(0.0, 0.0)) {
      supp_pts.push_back(f.domain().point_at(i));
      supp_vals.push_back(f[i]);
    }

  UnitRoots w(p);
  auto correlation_of = [&](u64 code) {
    FpVector v = FpVector::zero(p, coords.dim);
    u64 rest = code;
    for (size_t i = free_pos.size(); i-- > 0;) {
      v.c[static_cast<size_t>(free_pos[i])] = static_cast<u8>(rest % static_cast<u64>(p));
      rest /= static_cast<u64>(p);
    }
    QuadraticPoly cand = coords.unpack(v);
    std::vector<cplx> terms(supp_pts.size());
    for (size_t i = 0; i < supp_pts.size(); ++i) terms[i] = supp_vals[i] * w(cand.eval(supp_pts[i]));
    return std::abs(pairwise_sum(terms));
  };

  std::vector<u64> codes(examined);
  if (exhaustive) {
    for (u64 i = 0; i < examined; ++i) codes[i] = i;
  } else {
    SplitMix64 rng(config.seed);
    for (u64 i = 0; i < examined; ++i) codes[i] = rng.uniform_below(total);
  }
  std::vector<double> corr(examined);
  parallel_for(examined, config.threads, [&](size_t i) { corr[i] = correlation_of(codes[i]); });

  u64 best = 0;
  for (u64 i = 1; i < examined; ++i)
    if (corr[i] > corr[best] + 1e-12) best = i;
  verdict.best_correlation = examined ? corr[best] : 0.0;

  {
    FpVector v = FpVector::zero(p, coords.dim);
    u64 rest = codes.empty() ? 0 : codes[best];
    for (size_t i = free_pos.size(); i-- > 0;) {
      v.c[static_cast<size_t>(free_pos[i])] = static_cast<u8>(rest % static_cast<u64>(p));
      rest /= static_cast<u64>(p);
    }
    verdict.witness = coords.unpack(v);
  }

  if (verdict.best_correlation >=
      config.correlation_threshold * static_cast<double>(verdict.level_set_size) - 1e-9)
    verdict.branch = InverseVerdict::Branch::QuadraticWitness;
  else if (verdict.low_rank)
    verdict.branch = InverseVerdict::Branch::LowRank;
  else
    verdict.branch = InverseVerdict::Branch::NoWitnessFound;
  return verdict;
}

std::optional<LowRankCert> low_rank_certificate(const QuadTuple& q, int cutoff, u64 lambda_budget) {
  RankCertificate cert = tuple_rank(q, lambda_budget);
  if (cert.infinite || cert.rank > cutoff) return std::nullopt;
  return LowRankCert{cert.lambda, cert.rank};
}

}  // namespace qfa
