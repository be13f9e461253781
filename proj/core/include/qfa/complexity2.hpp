#pragma once

// Four-point translation-invariant configurations and the machinery behind
// the polylogarithmic density bound: projections onto quadratic level
// sets, the C_i coefficient identities, weighted solution counting by two
// independent routes, and the complexity / translation-invariance tests
// for linear systems.

#include <map>

#include "qfa/harmonic.hpp"
#include "qfa/quadratic.hpp"
#include "qfa/rational.hpp"

namespace qfa {

/// A system of k coefficient rows phi_i in F_p^d defining the configuration
/// [phi_1^T x, ..., phi_k^T x] for x in (F_p^n)^d.
struct LinearSystem {
  int p = 3;
  std::vector<FpVector> rows;

  int k() const { return static_cast<int>(rows.size()); }
  int d() const { return rows.empty() ? 0 : rows.front().dim(); }
};

/// True iff (1,...,1) lies in the row space of the system matrix, i.e. the
/// configuration space contains the diagonal.
bool is_translation_invariant(const LinearSystem& s);

/// True iff the tensor cubes phi_i x phi_i x phi_i are linearly
/// independent over F_p.  Verified by two elimination orders.
bool complexity_at_most_two(const LinearSystem& s);

struct KernelSumCheck {
  int kernel_dim = 0;
  bool pass = false;  // every kernel basis vector of the tensor-square matrix sums to 0
};

/// For translation-invariant systems: any mu with sum_i mu_i phi_i^{x2} = 0
/// satisfies sum_i mu_i = 0.
KernelSumCheck kernel_sum_check(const LinearSystem& s);

/// f averaged over the level sets of Q: constant on each fiber Q^{-1}(a),
/// zero on empty fibers.  Means are exact rationals for integer-valued f.
class ProjectedFunction {
 public:
  ProjectedFunction(const DenseFunction& f, const QuadTuple& q, u64 budget = u64(1) << 32);

  const QuadTuple& base() const { return q_; }
  cplx fiber_mean(const std::vector<int>& a) const;
  /// The projection as a dense function on f's domain.
  DenseFunction to_dense() const;
  /// Exact rational fiber means; only available for 0/1-valued inputs.
  bool has_exact_means() const { return has_exact_; }
  Rat exact_fiber_mean(const std::vector<int>& a) const;

 private:
  QuadTuple q_;
  Subspace domain_;
  std::vector<cplx> means_;       // indexed by level-value code
  std::vector<Rat> exact_means_;  // same indexing, when input is 0/1
  std::vector<u64> fiber_of_;     // per domain point
  bool has_exact_ = false;
  u64 value_code(const std::vector<int>& a) const;
};

ProjectedFunction project(const DenseFunction& f, const QuadTuple& q, u64 budget = u64(1) << 32);

/// C_0 = 1 and the three coefficient fractions attached to distinct
/// nonzero c_1, c_2, c_3; the results are all nonzero and sum to zero
/// (enforced).
std::array<int, 4> ci_coefficients(int c1, int c2, int c3, int p);

struct WeightedCountResult {
  double fourier = 0.0;       // E_ell prod_i fhat(C_i ell)
  double brute = 0.0;         // direct triple loop; NaN if skipped
  double rel_err = 0.0;       // |fourier - brute| / max(|brute|, 1)
  bool brute_computed = false;
};

/// sum over C_0 x_0 + C_1 x_1 + C_2 x_2 + C_3 x_3 = 0 of
/// f(x_0) f(x_1) f(x_2) f(x_3), computed by the Fourier route and (when
/// p^{3n} fits the budget) by the definitional triple loop.
WeightedCountResult weighted_solution_count(const DenseFunction& f, const std::array<int, 4>& c,
                                            u64 brute_budget = 15625, int threads = 0);

/// E_{x,y in H} f0(x) f1(x+c1 y) f2(x+c2 y) f3(x+c3 y).
cplx config_count(const DenseFunction& f0, const DenseFunction& f1, const DenseFunction& f2,
                  const DenseFunction& f3, int c1, int c2, int c3, u64 pair_budget = u64(1) << 32,
                  int threads = 0);

struct VonNeumannCheck {
  double count_full = 0.0;    // Lambda(f)
  double count_proj = 0.0;    // Lambda(Pi_Q f)
  double difference = 0.0;    // |count_full - count_proj|
  double u3_residual = 0.0;   // ||f - Pi_Q f||_{U^3} / ||1_H||_{U^3}
  double ratio = 0.0;         // difference / u3_residual (implicit constant)
};

/// Counting difference against the structured projection, compared with the
/// U^3 norm of the residual; report-only apart from |difference| <= 1.
VonNeumannCheck check_von_neumann(const DenseFunction& f, const QuadTuple& q, int c1, int c2, int c3,
                                  u64 u3_budget = 6561, int threads = 0);

}  // namespace qfa
