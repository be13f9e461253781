#pragma once

// Exact arithmetic in the prime fields F_p for small odd p, together with
// the basic vector / covector / point-code machinery everything else is
// built on.
//
// Points of F_p^n are stored as coordinate arrays (one byte per coordinate,
// always reduced mod p).  A point also has a "code": the big-endian base-p
// integer whose digits are the coordinates.  Increasing code order is
// exactly lexicographic order on coordinate tuples, which is the canonical
// enumeration order used throughout.

#include <complex>
#include <cstdint>
#include <vector>

#include "qfa/errors.hpp"

namespace qfa {

using u8 = std::uint8_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using cplx = std::complex<double>;

/// Supported field sizes.  The theory needs p odd; small p keeps exhaustive
/// searches within reach.
inline bool valid_prime(int p) { return p == 3 || p == 5 || p == 7; }

inline void require_prime(int p) {
  if (!valid_prime(p)) throw BadParams("p must be one of 3, 5, 7");
}

inline int fp_reduce(long long v, int p) {
  long long r = v % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

inline int fp_add(int a, int b, int p) { return (a + b) % p; }
inline int fp_sub(int a, int b, int p) { return (a - b + p) % p; }
inline int fp_mul(int a, int b, int p) { return (a * b) % p; }
inline int fp_neg(int a, int p) { return a == 0 ? 0 : p - a; }

/// Multiplicative inverse; a must be nonzero mod p.
inline int fp_inv(int a, int p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) throw ZeroInverse();
  // p <= 7: a^(p-2) by repeated multiplication.
  int r = 1;
  for (int e = 0; e < p - 2; ++e) r = (r * a) % p;
  return r;
}

inline u64 ipow(u64 base, unsigned exp) {
  u64 r = 1;
  while (exp--) r *= base;
  return r;
}

/// A point of F_p^n.
struct FpVector {
  int p = 3;
  std::vector<u8> c;  // coordinates, reduced mod p

  FpVector() = default;
  FpVector(int p_, std::vector<u8> coords) : p(p_), c(std::move(coords)) {}
  static FpVector zero(int p, int n) { return FpVector(p, std::vector<u8>(n, 0)); }

  int dim() const { return static_cast<int>(c.size()); }
  bool is_zero() const {
    for (u8 x : c)
      if (x) return false;
    return true;
  }
  bool operator==(const FpVector& o) const = default;
};

inline FpVector operator+(const FpVector& a, const FpVector& b) {
  FpVector r = a;
  for (int i = 0; i < a.dim(); ++i) r.c[i] = static_cast<u8>((a.c[i] + b.c[i]) % a.p);
  return r;
}

inline FpVector operator-(const FpVector& a, const FpVector& b) {
  FpVector r = a;
  for (int i = 0; i < a.dim(); ++i) r.c[i] = static_cast<u8>((a.c[i] - b.c[i] + a.p) % a.p);
  return r;
}

inline FpVector operator*(int s, const FpVector& a) {
  FpVector r = a;
  s = fp_reduce(s, a.p);
  for (int i = 0; i < a.dim(); ++i) r.c[i] = static_cast<u8>((s * a.c[i]) % a.p);
  return r;
}

/// Big-endian base-p code of a coordinate tuple: first coordinate is the
/// most significant digit, so code order == lexicographic order.
inline u64 point_code(const FpVector& x) {
  u64 code = 0;
  for (u8 v : x.c) code = code * static_cast<u64>(x.p) + v;
  return code;
}

inline FpVector point_from_code(u64 code, int p, int n) {
  FpVector x = FpVector::zero(p, n);
  for (int i = n - 1; i >= 0; --i) {
    x.c[static_cast<size_t>(i)] = static_cast<u8>(code % static_cast<u64>(p));
    code /= static_cast<u64>(p);
  }
  return x;
}

/// An element of the dual space: a row covector acting by
/// ell(x) = sum_i a_i x_i mod p.
struct LinearForm {
  int p = 3;
  std::vector<u8> a;

  LinearForm() = default;
  LinearForm(int p_, std::vector<u8> coeffs) : p(p_), a(std::move(coeffs)) {}
  static LinearForm zero(int p, int n) { return LinearForm(p, std::vector<u8>(n, 0)); }

  int dim() const { return static_cast<int>(a.size()); }
  bool is_zero() const {
    for (u8 x : a)
      if (x) return false;
    return true;
  }

  int eval(const FpVector& x) const {
    int s = 0;
    for (int i = 0; i < dim(); ++i) s += a[static_cast<size_t>(i)] * x.c[static_cast<size_t>(i)];
    return s % p;
  }

  bool operator==(const LinearForm& o) const = default;
};

inline LinearForm operator+(const LinearForm& f, const LinearForm& g) {
  LinearForm r = f;
  for (int i = 0; i < f.dim(); ++i) r.a[i] = static_cast<u8>((f.a[i] + g.a[i]) % f.p);
  return r;
}

inline LinearForm operator-(const LinearForm& f, const LinearForm& g) {
  LinearForm r = f;
  for (int i = 0; i < f.dim(); ++i) r.a[i] = static_cast<u8>((f.a[i] - g.a[i] + f.p) % f.p);
  return r;
}

inline LinearForm operator*(int s, const LinearForm& f) {
  LinearForm r = f;
  s = fp_reduce(s, f.p);
  for (int i = 0; i < f.dim(); ++i) r.a[i] = static_cast<u8>((s * f.a[i]) % f.p);
  return r;
}

inline u64 form_code(const LinearForm& f) {
  u64 code = 0;
  for (u8 v : f.a) code = code * static_cast<u64>(f.p) + v;
  return code;
}

inline LinearForm form_from_code(u64 code, int p, int n) {
  FpVector x = point_from_code(code, p, n);
  return LinearForm(p, std::move(x.c));
}

/// The p-th roots of unity e_p(k) = exp(2*pi*i*k/p), precomputed once per p.
class UnitRoots {
 public:
  explicit UnitRoots(int p);
  /// e_p(k) for any integer k (reduced internally).
  cplx operator()(long long k) const { return w_[static_cast<size_t>(fp_reduce(k, p_))]; }
  int p() const { return p_; }

 private:
  int p_;
  std::vector<cplx> w_;
};

}  // namespace qfa
