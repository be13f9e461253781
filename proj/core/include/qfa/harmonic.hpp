#pragma once

// Fourier analysis on a subspace H <= F_p^n and the Gowers U^2 / U^3 norms.
//
// Conventions.  The dual of H is identified with coordinate covectors
// ell in F_p^m (m = dim H), acting on the coefficient tuple t of a point:
//
//   fhat(ell) = sum_{x in H} f(x) e_p(ell . t(x)),
//
// enumerated in covector code order.  Expectations over the dual use the
// uniform probability measure, E_ell = p^-m sum_ell; sums over H use
// counting measure.  With these normalisations:
//
//   sum_x |f(x)|^2 = E_ell |fhat(ell)|^2            (Parseval)
//   ||f||_{U^2}^4  = E_ell |fhat(ell)|^4            (U^2 dual path)
//
// All floating accumulations use a fixed pairwise summation order, so
// results are identical run to run and across thread counts.

#include <optional>

#include "qfa/dense_function.hpp"

namespace qfa {

/// Fourier coefficients of f, indexed by covector code.
struct DualFunction {
  Subspace primal_domain;
  std::vector<cplx> values;  // size p^dim

  cplx at(const LinearForm& ell) const { return values[form_code(ell)]; }
};

/// Radix-p tensor transform, O(|H| * dim * p) complex operations.
DualFunction dft(const DenseFunction& f);
DenseFunction inverse_dft(const DualFunction& fhat);

/// Difference function Delta_h f(x) = f(x) * conj(f(x+h)).
DenseFunction difference_fn(const DenseFunction& f, const FpVector& h);

/// U^2 norm via the Fourier path (fourth root of E_ell |fhat|^4).
double u2_norm(const DenseFunction& f);
/// Definitional O(|H|^3) path; oracle for the fast path.
double u2_norm_direct(const DenseFunction& f);

/// U^3 norm: eighth root of sum_h ||Delta_h f||_{U^2}^4, fast U^2 per h.
/// Throws BudgetExceeded when |H| exceeds `domain_budget`.
double u3_norm(const DenseFunction& f, u64 domain_budget = 6561, int threads = 0);

/// Large spectrum {ell : |fhat(ell)| >= K}, in covector code order.
std::vector<LinearForm> spectrum(const DenseFunction& f, double K);

struct UniformityReport {
  double density = 0.0;       // |Phi| / |H|
  double epsilon = 0.0;       // max_{ell != 0} |ind_Phi_hat(ell)| / |Phi|
  LinearForm max_witness;     // first maximiser in covector code order
  u64 set_size = 0;
};

/// Fourier uniformity level of a nonempty Phi inside H.
UniformityReport fourier_uniformity(const PointSet& phi, const Subspace& h);

struct SpectralCheck {
  bool precondition_met = false;  // K >= sqrt(2 eps |Phi|) ||f||_2
  double threshold = 0.0;
  double K = 0.0;
  u64 spectrum_size = 0;
  double bound = 0.0;  // 2 |Phi| ||f||_2^2 / K^2
  bool pass = false;
  double epsilon = 0.0;
};

/// Spectral estimate |Spec(f,K)| <= 2|Phi| ||f||_2^2 / K^2; must pass
/// whenever the precondition holds.
SpectralCheck check_spectral_estimate(const DenseFunction& f, const PointSet& phi, double K);

struct RestrictionCheck {
  double q_exp = 0.0;
  double lhs = 0.0;           // E_ell |fhat|^q
  double rhs_no_const = 0.0;  // ||f||_2^q |Phi|^{q/2} (|G|^-1 + eps^{q/2-1} |Phi|^-1)
  double ratio = 0.0;         // lhs / rhs (implicit constant unknown)
  double epsilon = 0.0;
};

/// Restriction moment ratio; report-only (the constant O_q is implicit).
RestrictionCheck check_restriction(const DenseFunction& f, const PointSet& phi, double q_exp);

struct U2InverseWitness {
  LinearForm witness;        // argmax |fhat|
  double correlation = 0.0;  // |fhat(witness)|
  bool hypothesis_met = false;  // epsilon <= density^2
  double epsilon = 0.0;
  double density = 0.0;
};

/// Largest Fourier coefficient of f on Phi; callers compare the
/// correlation against c * eta^4 |Phi|.
U2InverseWitness u2_inverse_witness(const DenseFunction& f, const PointSet& phi);

}  // namespace qfa
