#pragma once

// Statement-level verification of the U^3 inverse dichotomy on quadratic
// level sets: exhaustive quadratic-phase witness search and low-rank
// certification at tiny scale.

#include <optional>

#include "qfa/harmonic.hpp"
#include "qfa/quadratic.hpp"

namespace qfa {

struct LowRankCert {
  std::vector<u8> lambda;
  int rank = 0;
};

struct InverseVerdict {
  enum class Branch { QuadraticWitness, LowRank, NoWitnessFound };

  double eta = 0.0;  // ||f||_{U^3} / ||1_{Q^{-1}(0)}||_{U^3}
  Branch branch = Branch::NoWitnessFound;
  std::optional<QuadraticPoly> witness;  // best q (constant term 0)
  double best_correlation = 0.0;         // |sum_x f(x) e_p(q(x))| at the best q
  std::optional<LowRankCert> low_rank;
  u64 level_set_size = 0;
  u64 candidates_examined = 0;
  bool exhaustive = true;
};

/// eta = ||f||_{U^3} / ||1_{Q^{-1}(0)}||_{U^3}; requires a nonempty level set.
double u3_relative_ratio(const DenseFunction& f, const QuadTuple& q, u64 u3_budget = 6561,
                         int threads = 0);

struct WitnessSearchConfig {
  bool exhaustive = true;
  u64 sample_count = 50000;  // sampled mode
  u64 seed = 0;
  u64 candidate_budget = u64(1) << 24;
  double correlation_threshold = 0.5;  // fraction of |Q^{-1}(0)|
  int rank_cutoff = 4;
  u64 u3_budget = 6561;
  int threads = 0;
};

/// Maximise |sum_x f(x) e_p(q(x))| over quadratic polynomials q (constant
/// term fixed to zero, candidates deduplicated modulo the span of Q's
/// coordinates, which leave the correlation unchanged on supp(f)).
/// The verdict takes the QuadraticWitness branch when the best correlation
/// reaches threshold * |Q^{-1}(0)|, the LowRank branch when tuple_rank(Q)
/// is at most the cutoff, and NoWitnessFound otherwise.
InverseVerdict quadratic_witness_search(const DenseFunction& f, const QuadTuple& q,
                                        const WitnessSearchConfig& config = {});

/// Lambda certificate when the tuple rank is at most `cutoff`.
std::optional<LowRankCert> low_rank_certificate(const QuadTuple& q, int cutoff,
                                                u64 lambda_budget = 2187);

}  // namespace qfa
