#include "qfa/matrix.hpp"

#include <utility>

namespace qfa {

FpMatrix FpMatrix::identity(int p, int n) {
  FpMatrix m(p, n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

FpMatrix FpMatrix::from_rows(int p, const std::vector<FpVector>& rows) {
  int cols = rows.empty() ? 0 : rows.front().dim();
  FpMatrix m(p, static_cast<int>(rows.size()), cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < cols; ++j) m.set(i, j, rows[static_cast<size_t>(i)].c[static_cast<size_t>(j)]);
  return m;
}

FpVector FpMatrix::row(int i) const {
  FpVector v(p, std::vector<u8>(e.begin() + static_cast<long>(i) * cols,
                                e.begin() + static_cast<long>(i + 1) * cols));
  return v;
}

bool FpMatrix::is_symmetric() const {
  if (rows != cols) return false;
  for (int i = 0; i < rows; ++i)
    for (int j = i + 1; j < cols; ++j)
      if (at(i, j) != at(j, i)) return false;
  return true;
}

FpMatrix transpose(const FpMatrix& m) {
  FpMatrix t(m.p, m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t.set(j, i, m.at(i, j));
  return t;
}

FpMatrix mat_mul(const FpMatrix& a, const FpMatrix& b) {
  FpMatrix r(a.p, a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      int aik = a.at(i, k);
      if (!aik) continue;
      for (int j = 0; j < b.cols; ++j) r.set(i, j, r.at(i, j) + aik * b.at(k, j));
    }
  return r;
}

FpVector mat_vec(const FpMatrix& a, const FpVector& x) {
  FpVector r = FpVector::zero(a.p, a.rows);
  for (int i = 0; i < a.rows; ++i) {
    int s = 0;
    for (int j = 0; j < a.cols; ++j) s += a.at(i, j) * x.c[static_cast<size_t>(j)];
    r.c[static_cast<size_t>(i)] = static_cast<u8>(s % a.p);
  }
  return r;
}

int quad_value(const FpMatrix& m, const FpVector& x) {
  int s = 0;
  for (int i = 0; i < m.rows; ++i) {
    if (!x.c[static_cast<size_t>(i)]) continue;
    int row_dot = 0;
    for (int j = 0; j < m.cols; ++j) row_dot += m.at(i, j) * x.c[static_cast<size_t>(j)];
    s += x.c[static_cast<size_t>(i)] * (row_dot % m.p);
  }
  return s % m.p;
}

namespace {

// In-place forward elimination to RREF; returns pivot columns.
std::vector<int> eliminate(FpMatrix& a) {
  std::vector<int> pivots;
  int p = a.p;
  int r = 0;
  for (int col = 0; col < a.cols && r < a.rows; ++col) {
    int pivot_row = -1;
    for (int i = r; i < a.rows; ++i)
      if (a.at(i, col)) {
        pivot_row = i;
        break;
      }
    if (pivot_row < 0) continue;
    if (pivot_row != r)
      for (int j = 0; j < a.cols; ++j) {
        int t = a.at(r, j);
        a.set(r, j, a.at(pivot_row, j));
        a.set(pivot_row, j, t);
      }
    int inv = fp_inv(a.at(r, col), p);
    for (int j = 0; j < a.cols; ++j) a.set(r, j, a.at(r, j) * inv);
    for (int i = 0; i < a.rows; ++i) {
      if (i == r) continue;
      int f = a.at(i, col);
      if (!f) continue;
      for (int j = 0; j < a.cols; ++j) a.set(i, j, a.at(i, j) + (p - f) * a.at(r, j));
    }
    pivots.push_back(col);
    ++r;
  }
  return pivots;
}

}  // namespace

int rank(const FpMatrix& m) {
  FpMatrix a = m;
  return static_cast<int>(eliminate(a).size());
}

FpMatrix rref(const FpMatrix& m) {
  FpMatrix a = m;
  int rk = static_cast<int>(eliminate(a).size());
  FpMatrix out(m.p, rk, m.cols);
  for (int i = 0; i < rk; ++i)
    for (int j = 0; j < m.cols; ++j) out.set(i, j, a.at(i, j));
  return out;
}

FpMatrix kernel_basis(const FpMatrix& m) {
  FpMatrix a = m;
  std::vector<int> pivots = eliminate(a);
  std::vector<char> is_pivot(static_cast<size_t>(m.cols), 0);
  for (int c : pivots) is_pivot[static_cast<size_t>(c)] = 1;

  FpMatrix out(m.p, 0, m.cols);
  for (int free_col = 0; free_col < m.cols; ++free_col) {
    if (is_pivot[static_cast<size_t>(free_col)]) continue;
    // Back-substitute with the free variable set to 1, all others 0.
    FpVector v = FpVector::zero(m.p, m.cols);
    v.c[static_cast<size_t>(free_col)] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) {
      int val = a.at(static_cast<int>(r), free_col);
      v.c[static_cast<size_t>(pivots[r])] = static_cast<u8>(fp_neg(val, m.p));
    }
    out.rows += 1;
    out.e.insert(out.e.end(), v.c.begin(), v.c.end());
  }
  return out;
}

FpMatrix symmetrize(const FpMatrix& m) {
  int half = fp_inv(2, m.p);
  FpMatrix s(m.p, m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) s.set(i, j, (m.at(i, j) + m.at(j, i)) * half);
  return s;
}

bool solve(const FpMatrix& m, const FpVector& b, FpVector& x_out) {
  // Eliminate the augmented matrix [M | b].
  FpMatrix a(m.p, m.rows, m.cols + 1);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) a.set(i, j, m.at(i, j));
    a.set(i, m.cols, b.c[static_cast<size_t>(i)]);
  }
  std::vector<int> pivots = eliminate(a);
  for (int c : pivots)
    if (c == m.cols) return false;  // pivot in the constants column
  FpVector x = FpVector::zero(m.p, m.cols);
  for (size_t r = 0; r < pivots.size(); ++r)
    x.c[static_cast<size_t>(pivots[r])] = static_cast<u8>(a.at(static_cast<int>(r), m.cols));
  x_out = std::move(x);
  return true;
}

}  // namespace qfa
