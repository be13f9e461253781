#pragma once

// Maximal level-set density, the high-rank partitioning recursion, and the
// sparsity-expansion density-increment driver.
//
// The maximal level set density of A relative to a tuple Q of homogeneous
// quadratic forms on H <= F_p^n is
//
//   delta_Q(A) = max over translates x in F_p^n, d-tuples L of linear
//                forms on H, and values a in F_p^d of
//                |(A - x) cap (Q+L)^{-1}(a)| / |(Q+L)^{-1}(a)|,
//
// taken over nonempty cells only.  All densities are exact rationals; the
// search order is translate, then L, then a, with a first-maximiser
// tie-break, so witnesses are deterministic.

#include <optional>

#include "qfa/brauer.hpp"
#include "qfa/quadratic.hpp"
#include "qfa/rational.hpp"

namespace qfa {

struct DensityWitness {
  Rat delta;                    // exact cell density
  FpVector translate;           // x
  std::vector<LinearForm> shifts;  // L, covectors on H coordinates
  std::vector<int> value;       // a
  bool exhaustive = true;       // false => sampled lower bound only
};

struct DensityBudget {
  u64 max_cells = u64(1) << 33;  // (# translates) * (# L tuples) * |H| cap
  u64 samples = 20000;           // sampling fallback
  u64 seed = 0;
  int threads = 0;
};

/// Exact maximum with lexicographically-first witness (exhaustive mode), or
/// a flagged sampled lower bound when the search space exceeds the budget.
DensityWitness max_level_density(const PointSet& a, const QuadTuple& q,
                                 const DensityBudget& budget = {});

struct DensityPreservationCheck {
  Rat before;
  Rat after;
  bool pass = false;
};

/// delta_{Q,q}(A) >= delta_Q(A), exact rationals.
DensityPreservationCheck check_density_preservation(const PointSet& a, const QuadTuple& q,
                                                    const QuadraticPoly& extra,
                                                    const DensityBudget& budget = {});

struct PartitionStats {
  int codim_increase = 0;
  int d_out = 0;
  int rank_achieved = 0;     // -1 when the output tuple is empty (rank infinite)
  std::vector<Rat> densities_before;
  std::vector<Rat> densities_after;
};

struct PartitionResult {
  Subspace new_domain;  // H~ <= H
  QuadTuple new_tuple;  // Q~ on H~
  PartitionStats stats;
};

/// The partitioning recursion: peel minimum-rank combinations through
/// radicals and witness-aligned hyperplane slices until the surviving
/// tuple has rank >= R on the surviving subspace.  Output guarantees
/// (hard-asserted on every call):
///   delta_{Q~}(A_i) >= delta_Q(A_i) for all i,
///   rank(Q~) >= R,  codim_H(H~) <= (R + r - 1) d,  d~ <= d.
PartitionResult high_rank_partition(const QuadTuple& q, int target_rank,
                                    const std::vector<PointSet>& sets,
                                    const DensityBudget& budget = {});

enum class SetClass { Sparse, DenseExpanding, DenseNonExpanding };

struct Classification {
  SetClass tag;
  Rat density;            // delta_Q(A)
  u64 expansion_count = 0;  // |{y in H cap Q^{-1}(0) : exists x, x+y, x+2y in A}|
  u64 level_size = 0;       // |H cap Q^{-1}(0)|
};

/// The trichotomy: Sparse when delta_Q(A) < alpha; DenseExpanding when the
/// expansion set exceeds (1 - beta)|H cap Q^{-1}(0)|; DenseNonExpanding
/// otherwise.
Classification classify(const PointSet& a, const QuadTuple& q, const Rat& alpha, const Rat& beta,
                        const DensityBudget& budget = {});

struct IncrementResult {
  QuadraticPoly q;  // homogeneous increment form
  Rat gain;         // delta_{Q,q}(A) - delta_Q(A)
};

/// Exhaustive (or sampled) search for a homogeneous quadratic form whose
/// addition increases the maximal level-set density by at least
/// `gain_threshold`.  The linear part of a candidate never changes
/// delta_{Q,q} (the density definition already maximises over all linear
/// shifts), so the search ranges over homogeneous parts only.
std::optional<IncrementResult> find_increment(const PointSet& a, const QuadTuple& q,
                                              const Rat& gain_threshold,
                                              const DensityBudget& budget = {},
                                              u64 candidate_budget = u64(1) << 22);

struct StageTrace {
  int m = 0;
  int d = 0;
  int codim = 0;
  int rank = -1;  // -1 when d == 0
  std::vector<SetClass> classes;
  Rat density_sum;
  std::string action;  // "terminate" | "increment(set=i, gain=..)" | ...
};

struct SetVerdict {
  bool sparse = false;     // |A cap H cap Q^{-1}(0)| < alpha |H cap Q^{-1}(0)|
  bool expanding = false;  // expansion set > (1-beta) |H cap Q^{-1}(0)|
  u64 intersection = 0;
  u64 expansion_count = 0;
  u64 level_size = 0;
};

struct DichotomyCertificate {
  Subspace domain;    // H~
  QuadTuple tuple;    // Q~ on H~
  Rat alpha;
  Rat beta;
  std::vector<SetVerdict> verdicts;  // one per input set
};

struct IterationOutcome {
  bool terminated = false;  // certificate emitted
  int stages = 0;
  std::vector<StageTrace> trace;
  std::optional<DichotomyCertificate> certificate;
  std::string failure;  // set when no increment above threshold was found
};

struct IterationConfig {
  Rat alpha{1, 4};
  Rat beta{1, 4};
  int rank_target = 2;
  Rat gain_threshold{1, 100};
  int max_stages = 32;
  DensityBudget density_budget;
  u64 candidate_budget = u64(1) << 22;
};

/// The density-increment loop: classify every set, stop with a
/// re-verifiable certificate when no set is dense non-expanding, otherwise
/// increment one such set's tuple and re-partition to high rank.  Stage
/// bookkeeping (d <= m, rank >= R, codimension cap, zero-level-set
/// dimension bound) is hard-asserted at every stage.
IterationOutcome sparsity_expansion_iterate(const std::vector<PointSet>& sets, int p, int n,
                                            const IterationConfig& config);

/// Recompute a certificate's verdicts from scratch; true iff every set
/// satisfies its recorded sparse-or-expanding disjunction.
bool verify_certificate(const DichotomyCertificate& cert, const std::vector<PointSet>& sets,
                        const DensityBudget& budget = {});

}  // namespace qfa
