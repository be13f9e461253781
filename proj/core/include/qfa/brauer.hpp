#pragma once

// The Brauer configuration x, y, x+y, x+2y: counting operators on level
// sets, Ramsey colorings of F_p^n \ {0}, and the expansion set used by the
// sparsity-expansion dichotomy.

#include <optional>

#include "qfa/harmonic.hpp"
#include "qfa/quadratic.hpp"
#include "qfa/rational.hpp"

namespace qfa {

/// An r-coloring of the nonzero points of F_p^n.  colors[i] is the color
/// (1..r) of the point with code i+1; the zero vector carries no color.
struct Coloring {
  int p = 3;
  int n = 0;
  int r = 1;
  std::vector<int> colors;

  u64 nonzero_count() const { return ipow(static_cast<u64>(p), static_cast<unsigned>(n)) - 1; }
  int color_of_code(u64 code) const { return colors[code - 1]; }
  int color_of(const FpVector& x) const { return color_of_code(point_code(x)); }
};

struct BrauerWitness {
  FpVector x;
  FpVector y;
  int color = 0;
};

/// sum_{x,y in H} f0(x) f1(x+y) f2(x+2y) g(y).  Exact integer accumulation
/// when every input is 0/1-valued.
cplx count_brauer(const DenseFunction& f0, const DenseFunction& f1, const DenseFunction& f2,
                  const DenseFunction& g, u64 pair_budget = u64(1) << 32, int threads = 0);

/// Exact integer path on indicator sets restricted to H.
long long count_brauer_sets(const PointSet& f0, const PointSet& f1, const PointSet& f2,
                            const PointSet& g, const Subspace& h, u64 pair_budget = u64(1) << 32,
                            int threads = 0);

struct CountingLemmaCheck {
  long long count = 0;        // exact Brauer count with f = 1_{Q^{-1}(0)}, g = 1_A
  Rat main_term;              // |H| |A| p^{-2d}
  double normalized_error = 0.0;  // |count - main| p^{R/2} / |H|^2
  int rank = 0;
  bool rank_infinite = false;
};

/// Counting operator against its main term on a level set; A must lie in
/// the zero set of the homogeneous part of Q.
CountingLemmaCheck check_counting_lemma(const QuadTuple& q, const PointSet& a,
                                        u64 pair_budget = u64(1) << 32, int threads = 0);

/// Color of x = largest index i with x_i != 0.  Contains no monochromatic
/// Brauer quadruple.  Requires n <= r.
Coloring lower_bound_coloring(int p, int n, int r);

/// First monochromatic quadruple in (x, y) enumeration order, if any.
/// A quadruple is admissible only when all four points are nonzero.
std::optional<BrauerWitness> find_monochromatic_brauer(const Coloring& c);

/// {y in H cap Q^{-1}(0) : exists x with x, x+y, x+2y in A}, x ranging
/// over the ambient space.
PointSet expansion_set(const PointSet& a, const QuadTuple& q, u64 budget = u64(1) << 32);

struct U3ControlRecord {
  double eta = 0.0;             // |count(f)| / count(indicators)
  double ratios[3] = {0, 0, 0};  // ||f_i||_{U^3} / ||1_{Q^{-1}(0)}||_{U^3}
  double indicator_count = 0.0;
  double weighted_count_abs = 0.0;
  bool structured_assert = false;  // min ratio >= eta / 4 was enforced
};

/// Relates the Brauer counting operator to U^3 norms.  When
/// `structured_family` is set (phase-times-indicator inputs), the bound
/// min_i ratio_i >= eta/4 is enforced; otherwise the record is report-only.
U3ControlRecord check_u3_control(const DenseFunction& f0, const DenseFunction& f1,
                                 const DenseFunction& f2, const DenseFunction& g, const QuadTuple& q,
                                 bool structured_family = false, u64 pair_budget = u64(1) << 32,
                                 u64 u3_budget = 6561, int threads = 0);

}  // namespace qfa
