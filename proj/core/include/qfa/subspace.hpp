#pragma once

// Subspaces and cosets of F_p^n.
//
// A Subspace stores its basis in reduced row-echelon form, which makes
// equality of subspaces decidable by representation equality.  A coset
// additionally stores an offset, canonicalised so that the offset's pivot
// coordinates are zero; coset equality is then also representational.
//
// Point enumeration runs over coefficient tuples t in lexicographic order
// (big-endian base-p codes), producing offset + sum_i t_i * basis_i.  With
// the RREF convention, the coefficients of any member point are simply its
// pivot coordinates, so point -> index lookups are O(n).

#include <optional>
#include <vector>

#include "qfa/matrix.hpp"

namespace qfa {

class Subspace {
 public:
  Subspace() = default;

  static Subspace full(int p, int n);
  static Subspace zero_space(int p, int n);
  /// Span of arbitrary generators (reduced to RREF).
  static Subspace span(int p, int n, const std::vector<FpVector>& generators);
  /// Coset v + S.  The offset is reduced against the basis pivots.
  static Subspace coset(const Subspace& s, const FpVector& offset);

  int p() const { return p_; }
  int ambient_dim() const { return ambient_; }
  int dim() const { return basis_.rows; }
  int codim() const { return ambient_ - dim(); }
  bool has_offset() const { return !offset_.is_zero(); }
  const FpVector& offset() const { return offset_; }
  /// Basis rows in RREF (the linear part; valid for cosets too).
  const FpMatrix& basis() const { return basis_; }
  FpVector basis_vector(int i) const { return basis_.row(i); }
  const std::vector<int>& pivots() const { return pivots_; }

  u64 point_count() const { return ipow(static_cast<u64>(p_), static_cast<unsigned>(dim())); }

  /// Point with coefficient tuple decoded from `index` (big-endian).
  FpVector point_at(u64 index) const;
  /// All p^dim points in enumeration order; throws BudgetExceeded if the
  /// count exceeds `budget`.
  std::vector<FpVector> enumerate_points(u64 budget = u64(1) << 40) const;

  bool contains(const FpVector& x) const;
  /// Enumeration index of a member point; nullopt if not a member.
  std::optional<u64> index_of(const FpVector& x) const;
  /// Coefficients of x - offset w.r.t. the basis (requires membership).
  FpVector coefficients_of(const FpVector& x) const;

  /// Linear part (drops the offset).
  Subspace linear_part() const;

  /// {ell in (F_p^n)^* : ell(v) = 0 for all v in this subspace}.  The dual
  /// is identified with F_p^n, so the result is returned as a Subspace
  /// whose vectors are covector coefficient arrays.  Requires no offset.
  Subspace annihilator() const;

  /// Intersection of two subspaces of the same ambient space (no offsets).
  static Subspace intersect(const Subspace& a, const Subspace& b);

  /// Coset representatives of K inside this subspace (K <= this, both
  /// offset-free): one representative per coset, deterministic order,
  /// first representative is 0.
  std::vector<FpVector> coset_reps(const Subspace& k) const;

  bool operator==(const Subspace& o) const = default;

 private:
  int p_ = 3;
  int ambient_ = 0;
  FpMatrix basis_;    // RREF rows
  FpVector offset_;   // canonical: pivot coordinates zero
  std::vector<int> pivots_;

  void recompute_pivots();
  void canonicalize_offset();
};

/// {x in V : ell(x) = 0 for all given forms}; V must be offset-free.
/// Satisfies rank-nullity: dim(result) = dim(V) - rank(forms restricted to V).
Subspace kernel(const std::vector<LinearForm>& forms, const Subspace& v);

/// Ambient extension of a covector given on H's coordinates: the unique
/// form supported on H's pivot coordinates whose restriction to H is cov.
LinearForm lift_covector(const LinearForm& cov, const Subspace& h);

}  // namespace qfa
