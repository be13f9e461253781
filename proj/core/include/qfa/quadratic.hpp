#pragma once

// Quadratic polynomials q(x) = x^T B x + Lx + c over F_p (B symmetric),
// d-tuples of them on a domain subspace H, tuple rank, Weyl sums, level
// sets, differenced level-set structure and the pseudorandomness censuses.
//
// Rank of a tuple is the minimum over nonzero scalar combinations lambda of
// the matrix rank of sum_i lambda_i B_i restricted to H.  All rank claims
// in this module are relative to the tuple's domain.

#include <optional>

#include "qfa/dense_function.hpp"
#include "qfa/matrix.hpp"
#include "qfa/point_set.hpp"
#include "qfa/subspace.hpp"

namespace qfa {

struct QuadraticPoly {
  FpMatrix b;    // symmetric bilinear part, ambient n x n
  LinearForm l;  // homogeneous linear part
  int c = 0;

  QuadraticPoly() = default;
  QuadraticPoly(FpMatrix b_, LinearForm l_, int c_);
  static QuadraticPoly zero(int p, int n);
  static QuadraticPoly homogeneous(FpMatrix b);

  int p() const { return b.p; }
  int ambient_dim() const { return b.rows; }
  int eval(const FpVector& x) const;
  bool is_homogeneous() const { return l.is_zero() && c == 0; }
  QuadraticPoly homogeneous_part() const { return homogeneous(b); }

  bool operator==(const QuadraticPoly& o) const = default;
};

/// Rank of a tuple together with a minimising combination.  d = 0 tuples
/// have vacuously infinite rank.
struct RankCertificate {
  bool infinite = false;
  int rank = 0;
  std::vector<u8> lambda;  // empty iff infinite

  bool at_least(int r) const { return infinite || rank >= r; }
};

class QuadTuple {
 public:
  QuadTuple(Subspace domain, std::vector<QuadraticPoly> polys);

  int p() const { return domain_.p(); }
  int ambient_dim() const { return domain_.ambient_dim(); }
  int d() const { return static_cast<int>(polys_.size()); }
  const Subspace& domain() const { return domain_; }
  const QuadraticPoly& poly(int i) const { return polys_[static_cast<size_t>(i)]; }
  const std::vector<QuadraticPoly>& polys() const { return polys_; }

  std::vector<int> eval(const FpVector& x) const;
  bool is_homogeneous() const;
  QuadTuple homogeneous_part() const;
  QuadTuple appended(const QuadraticPoly& q) const;
  QuadTuple prefix(int k) const;  // first k coordinates
  QuadTuple with_domain(Subspace h) const;

 private:
  Subspace domain_;  // offset-free
  std::vector<QuadraticPoly> polys_;
};

/// The linear form x -> b(u, x), i.e. the row covector u^T B.
LinearForm bilinear_row_form(const FpMatrix& b, const FpVector& u);

/// Exhaustive projective lambda search; the certificate's lambda is the
/// lexicographically first minimiser.  Throws BudgetExceeded when p^d
/// exceeds `lambda_budget`.
RankCertificate tuple_rank(const QuadTuple& q, u64 lambda_budget = 2187);

/// Tuple rewritten in the coordinates of V <= domain(Q): ambient dimension
/// becomes dim V and the new domain is the full coordinate space.
/// Evaluation commutes with the coordinate map, and the restricted rank is
/// at least rank(Q) - 2 codim(V) (checked).
QuadTuple restrict_tuple(const QuadTuple& q, const Subspace& v);

/// {x in H : q_i(x) = a_i for all i}, as an ambient point set.
PointSet level_set(const QuadTuple& q, const std::vector<int>& a, u64 budget = u64(1) << 32);
inline PointSet zero_level_set(const QuadTuple& q, u64 budget = u64(1) << 32) {
  return level_set(q, std::vector<int>(static_cast<size_t>(q.d()), 0), budget);
}

struct WeylSum {
  cplx value;
  double bound;  // |V| p^{D - R/2}
  int rank = 0;
};

/// Exact character sum over a coset V + x0 with verification of the
/// bound |sum| <= |V| p^{D - R/2} (R = ambient rank of the homogeneous
/// part, D = ambient codimension of V).
WeylSum weyl_sum(const QuadraticPoly& q, const Subspace& coset);

struct DifferencedSet {
  PointSet phi;           // the intersected level set Phi_{u,v}
  Subspace v_subspace;    // V_{u,v}
  bool identity_checked;  // Phi == Q^{-1}(0) cap (V + x0) for every x0 in Phi
};

/// Differenced level set Phi_{u,v} = Q^{-1}(0) cap_i [Q^{-1}(0) - u_i]
/// cap_j [v_j - Q^{-1}(0)] together with its structure subspace; the exact
/// set identity is verified for every base point.
DifferencedSet differenced_set(const QuadTuple& q, const std::vector<FpVector>& us,
                               const std::vector<FpVector>& vs, u64 budget = u64(1) << 32);

struct CensusRecord {
  u64 population = 0;   // tuples examined
  u64 exceptional = 0;  // tuples failing the displayed inequality
  // Exact cap comparison: exceptional * p^{max(0, R-kd)} <= |H|^k * p^{max(0, kd-R)}.
  bool within_cap = false;
  std::string cap;  // human-readable cap value
  bool sampled = false;
};

/// Count tuples (h_1..h_k) for which the d*k forms h_j^T b_i + l_ij fail
/// to be linearly independent on H; the count must stay within
/// |H|^k p^{kd - R}.
CensusRecord generic_codim_census(const QuadTuple& b, const std::vector<std::vector<LinearForm>>& ls,
                                  int k, u64 budget = u64(1) << 32);

struct CosetUniformityCheck {
  cplx sum;
  cplx main_term;
  double error = 0.0;
  double bound = 0.0;  // |H| p^{-R/2}
  bool pass = false;
  bool vacuous = false;  // bound exceeds the trivial bound |V|
};

/// Character sum of Q^{-1}(0) on the coset V + h against e_p(l x),
/// compared with 1_{V^perp}(l) e_p(l h) |V| p^{-d} at error |H| p^{-R/2}.
CosetUniformityCheck check_coset_uniformity(const QuadTuple& q, const Subspace& v, const FpVector& h,
                                            const LinearForm& ell);

struct DifferencedCensus {
  CensusRecord once;          // h census (Phi_h and Psi_h displays)
  CensusRecord thrice;        // (h1,h2,h3) census at the p^{-R/2} reading
  u64 thrice_exceptional_displayed = 0;  // failures under the displayed p^{+R/2} bound
};

/// Once-differenced census is exhaustive over h in H; the thrice-differenced
/// census examines `triple_samples` seeded triples (exhaustive if the budget
/// permits and triple_samples == 0).
DifferencedCensus differenced_uniformity_census(const QuadTuple& q, u64 triple_samples = 200,
                                                u64 seed = 0, u64 budget = u64(1) << 32,
                                                int threads = 0);

}  // namespace qfa
