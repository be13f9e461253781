#pragma once

// Dense matrices over F_p with exact Gaussian elimination.  Dimensions stay
// tiny (n <= 16), so everything is byte-valued and row-major.

#include <vector>

#include "qfa/fp.hpp"

namespace qfa {

struct FpMatrix {
  int p = 3;
  int rows = 0;
  int cols = 0;
  std::vector<u8> e;  // row-major, reduced mod p

  FpMatrix() = default;
  FpMatrix(int p_, int r, int c) : p(p_), rows(r), cols(c), e(static_cast<size_t>(r) * c, 0) {}

  static FpMatrix identity(int p, int n);
  static FpMatrix from_rows(int p, const std::vector<FpVector>& rows);

  int at(int i, int j) const { return e[static_cast<size_t>(i) * cols + j]; }
  void set(int i, int j, int v) { e[static_cast<size_t>(i) * cols + j] = static_cast<u8>(fp_reduce(v, p)); }

  FpVector row(int i) const;
  bool is_symmetric() const;
  bool operator==(const FpMatrix& o) const = default;
};

FpMatrix transpose(const FpMatrix& m);
FpMatrix mat_mul(const FpMatrix& a, const FpMatrix& b);
FpVector mat_vec(const FpMatrix& a, const FpVector& x);

/// x^T M x mod p.
int quad_value(const FpMatrix& m, const FpVector& x);

/// Row rank over F_p (equals column rank).
int rank(const FpMatrix& m);

/// Reduced row-echelon form; zero rows are dropped, so the result has
/// exactly rank(m) rows with leading 1s in strictly increasing columns.
FpMatrix rref(const FpMatrix& m);

/// Basis (as matrix rows) of the right kernel {x : M x = 0}.
FpMatrix kernel_basis(const FpMatrix& m);

/// Symmetric matrix with the same quadratic values: (M + M^T) / 2.
/// Requires p odd (which all supported p are).
FpMatrix symmetrize(const FpMatrix& m);

/// Solve M x = b.  Returns false if inconsistent; otherwise writes one
/// solution (free variables set to 0).
bool solve(const FpMatrix& m, const FpVector& b, FpVector& x_out);

}  // namespace qfa
