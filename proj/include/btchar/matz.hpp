#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "btchar/intutil.hpp"

namespace btchar {

// Dense integer matrix, row-major.
struct mat {
  int rows = 0, cols = 0;
  std::vector<i64> a;

  mat() = default;
  mat(int r, int c) : rows(r), cols(c), a(size_t(r) * c, 0) {}

  i64& operator()(int i, int j) { return a[size_t(i) * cols + j]; }
  i64 operator()(int i, int j) const { return a[size_t(i) * cols + j]; }

  static mat identity(int n) {
    mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static mat scalar(int n, i64 c) {
    mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = c;
    return m;
  }

  friend mat operator*(const mat& x, const mat& y) {
    if (x.cols != y.rows) throw error(errc::domain, "mat: shape mismatch");
    mat r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
      for (int k = 0; k < x.cols; ++k) {
        i64 v = x(i, k);
        if (!v) continue;
        for (int j = 0; j < y.cols; ++j)
          r(i, j) = checked_i64(i128(r(i, j)) + i128(v) * y(k, j), "mat*");
      }
    return r;
  }
  friend mat operator+(const mat& x, const mat& y) {
    mat r(x.rows, x.cols);
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
  }
  friend mat operator-(const mat& x, const mat& y) {
    mat r(x.rows, x.cols);
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
  }
  friend bool operator==(const mat& x, const mat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }

  mat scaled(i64 c) const {
    mat r = *this;
    for (auto& v : r.a) v = mul_i64(v, c);
    return r;
  }

  i64 trace() const {
    i64 t = 0;
    for (int i = 0; i < rows; ++i) t += (*this)(i, i);
    return t;
  }
};

// Determinant by Bareiss fraction-free elimination (exact, i128 internal).
inline i128 det_i128(const mat& m) {
  int n = m.rows;
  if (n != m.cols) throw error(errc::domain, "det: not square");
  std::vector<i128> w(m.a.begin(), m.a.end());
  auto at = [&](int i, int j) -> i128& { return w[size_t(i) * n + j]; };
  i128 sign = 1, prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (at(k, k) == 0) {
      int s = -1;
      for (int i = k + 1; i < n; ++i)
        if (at(i, k) != 0) {
          s = i;
          break;
        }
      if (s < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(s, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
    prev = at(k, k);
  }
  return sign * at(n - 1, n - 1);
}

inline i64 det64(const mat& m) { return checked_i64(det_i128(m), "det"); }

namespace detail {

using col_t = std::vector<i128>;

inline bool col_zero(const col_t& c) {
  for (auto v : c)
    if (v != 0) return false;
  return true;
}

}  // namespace detail

// Column-style Hermite normal form of the column span of A.
// Returns an n x r matrix (r = rank), "upper triangular" in the sense that
// the pivot of column j sits in a strictly increasing row position, the pivot
// is positive, and entries to the right of a pivot row are reduced modulo it.
// For full-rank square input the result is upper triangular with positive
// diagonal and 0 <= B[i][j] < B[i][i] for j > i.
inline mat hnf(const mat& A) {
  int n = A.rows, m = A.cols;
  std::vector<detail::col_t> cols(m, detail::col_t(n, 0));
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) cols[j][i] = A(i, j);

  std::vector<int> pivot_of_row(n, -1);
  std::vector<bool> used(m, false);
  for (int r = n - 1; r >= 0; --r) {
    // gcd-eliminate row r among unused columns
    while (true) {
      int best = -1;
      for (int j = 0; j < m; ++j) {
        if (used[j] || cols[j][r] == 0) continue;
        if (best < 0) {
          best = j;
          continue;
        }
        i128 a = cols[j][r] < 0 ? -cols[j][r] : cols[j][r];
        i128 b = cols[best][r] < 0 ? -cols[best][r] : cols[best][r];
        if (a < b) best = j;
      }
      if (best < 0) break;
      bool others = false;
      for (int j = 0; j < m; ++j) {
        if (j == best || used[j] || cols[j][r] == 0) continue;
        others = true;
        i128 q = cols[j][r] / cols[best][r];
        for (int i = 0; i < n; ++i) cols[j][i] -= q * cols[best][i];
      }
      if (!others) {
        if (cols[best][r] < 0)
          for (int i = 0; i < n; ++i) cols[best][i] = -cols[best][i];
        pivot_of_row[r] = best;
        used[best] = true;
        break;
      }
    }
  }
  // assemble columns ordered by pivot row
  std::vector<int> order;
  for (int r = 0; r < n; ++r)
    if (pivot_of_row[r] >= 0) order.push_back(pivot_of_row[r]);
  int rank = int(order.size());
  std::vector<detail::col_t> out;
  out.reserve(rank);
  for (int j : order) out.push_back(cols[j]);
  // reduce entries to the right of each pivot
  std::vector<int> prow;
  for (int r = 0; r < n; ++r)
    if (pivot_of_row[r] >= 0) prow.push_back(r);
  for (int c = rank - 1; c >= 0; --c) {
    int r = prow[c];
    for (int j = c + 1; j < rank; ++j) {
      i128 q = out[j][r] / out[c][r];
      if (out[j][r] - q * out[c][r] < 0) q -= 1;  // floor
      if (q == 0) continue;
      for (int i = 0; i < n; ++i) out[j][i] -= q * out[c][i];
    }
  }
  mat B(n, rank);
  for (int j = 0; j < rank; ++j)
    for (int i = 0; i < n; ++i) B(i, j) = checked_i64(out[j][i], "hnf");
  return B;
}

// Integer kernel of A (n x m): returns m x k matrix whose columns form a
// basis of { x in Z^m : A x = 0 }.
inline mat int_kernel(const mat& A) {
  int n = A.rows, m = A.cols;
  std::vector<detail::col_t> cols(m, detail::col_t(n, 0));
  std::vector<detail::col_t> u(m, detail::col_t(m, 0));
  for (int j = 0; j < m; ++j) {
    u[j][j] = 1;
    for (int i = 0; i < n; ++i) cols[j][i] = A(i, j);
  }
  std::vector<bool> used(m, false);
  for (int r = n - 1; r >= 0; --r) {
    while (true) {
      int best = -1;
      for (int j = 0; j < m; ++j) {
        if (used[j] || cols[j][r] == 0) continue;
        if (best < 0) {
          best = j;
          continue;
        }
        i128 a = cols[j][r] < 0 ? -cols[j][r] : cols[j][r];
        i128 b = cols[best][r] < 0 ? -cols[best][r] : cols[best][r];
        if (a < b) best = j;
      }
      if (best < 0) break;
      bool others = false;
      for (int j = 0; j < m; ++j) {
        if (j == best || used[j] || cols[j][r] == 0) continue;
        others = true;
        i128 q = cols[j][r] / cols[best][r];
        for (int i = 0; i < n; ++i) cols[j][i] -= q * cols[best][i];
        for (int i = 0; i < m; ++i) u[j][i] -= q * u[best][i];
      }
      if (!others) {
        used[best] = true;
        break;
      }
    }
  }
  std::vector<int> ker;
  for (int j = 0; j < m; ++j)
    if (!used[j] && detail::col_zero(cols[j])) ker.push_back(j);
  mat K(m, int(ker.size()));
  for (size_t c = 0; c < ker.size(); ++c)
    for (int i = 0; i < m; ++i) K(i, int(c)) = checked_i64(u[ker[c]][i], "ker");
  return K;
}

// Smith-type decomposition of the column span: returns a unimodular W and
// diagonal entries d such that span(C) = span(W * diag(d)).  C must be square
// and nonsingular.
struct smith_span_result {
  mat W;
  std::vector<i64> d;
};

inline smith_span_result smith_span(const mat& C) {
  int n = C.rows;
  if (n != C.cols || det_i128(C) == 0)
    throw error(errc::domain, "smith_span: need nonsingular square matrix");
  std::vector<i128> w(C.a.begin(), C.a.end());
  auto at = [&](int i, int j) -> i128& { return w[size_t(i) * n + j]; };
  std::vector<i128> W(size_t(n) * n, 0);
  auto Wat = [&](int i, int j) -> i128& { return W[size_t(i) * n + j]; };
  for (int i = 0; i < n; ++i) Wat(i, i) = 1;

  auto abs128 = [](i128 v) { return v < 0 ? -v : v; };

  // row op: row j += q * row i  =>  W col i -= q * W col j
  auto row_add = [&](int i, int j, i128 q) {
    for (int k = 0; k < n; ++k) at(j, k) += q * at(i, k);
    for (int k = 0; k < n; ++k) Wat(k, i) -= q * Wat(k, j);
  };
  auto row_swap = [&](int i, int j) {
    for (int k = 0; k < n; ++k) std::swap(at(i, k), at(j, k));
    for (int k = 0; k < n; ++k) std::swap(Wat(k, i), Wat(k, j));
  };
  auto row_neg = [&](int i) {
    for (int k = 0; k < n; ++k) at(i, k) = -at(i, k);
    for (int k = 0; k < n; ++k) Wat(k, i) = -Wat(k, i);
  };
  auto col_add = [&](int i, int j, i128 q) {  // col j += q * col i
    for (int k = 0; k < n; ++k) at(k, j) += q * at(k, i);
  };
  auto col_swap = [&](int i, int j) {
    for (int k = 0; k < n; ++k) std::swap(at(k, i), at(k, j));
  };

  for (int t = 0; t < n; ++t) {
    while (true) {
      int bi = -1, bj = -1;
      for (int i = t; i < n; ++i)
        for (int j = t; j < n; ++j)
          if (at(i, j) != 0 &&
              (bi < 0 || abs128(at(i, j)) < abs128(at(bi, bj)))) {
            bi = i;
            bj = j;
          }
      if (bi < 0) throw error(errc::domain, "smith_span: singular block");
      if (bi != t) row_swap(bi, t);
      if (bj != t) col_swap(bj, t);
      if (at(t, t) < 0) row_neg(t);
      bool dirty = false;
      for (int i = t + 1; i < n; ++i)
        if (at(i, t) != 0) {
          i128 q = at(i, t) / at(t, t);
          row_add(t, i, -q);
          if (at(i, t) != 0) dirty = true;
        }
      for (int j = t + 1; j < n; ++j)
        if (at(t, j) != 0) {
          i128 q = at(t, j) / at(t, t);
          col_add(t, j, -q);
          if (at(t, j) != 0) dirty = true;
        }
      if (!dirty) break;
    }
  }
  smith_span_result res;
  res.W = mat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) res.W(i, j) = checked_i64(Wat(i, j), "smith");
  res.d.resize(n);
  for (int i = 0; i < n; ++i) res.d[i] = checked_i64(at(i, i), "smith");
  return res;
}

// Exact rational matrix.
struct qmat {
  int n = 0;
  std::vector<rat> a;

  qmat() = default;
  explicit qmat(int nn) : n(nn), a(size_t(nn) * nn) {}
  qmat(const mat& m, i64 den = 1) : n(m.rows), a(size_t(m.rows) * m.rows) {
    if (m.rows != m.cols) throw error(errc::domain, "qmat: not square");
    for (size_t i = 0; i < a.size(); ++i) a[i] = rat(m.a[i], den);
  }

  rat& operator()(int i, int j) { return a[size_t(i) * n + j]; }
  const rat& operator()(int i, int j) const { return a[size_t(i) * n + j]; }

  static qmat identity(int n) {
    qmat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = rat(1);
    return m;
  }

  friend qmat operator*(const qmat& x, const qmat& y) {
    qmat r(x.n);
    for (int i = 0; i < x.n; ++i)
      for (int k = 0; k < x.n; ++k) {
        if (x(i, k).is_zero()) continue;
        for (int j = 0; j < x.n; ++j)
          r(i, j) = r(i, j) + x(i, k) * y(k, j);
      }
    return r;
  }
  friend qmat operator+(const qmat& x, const qmat& y) {
    qmat r(x.n);
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
  }
  friend qmat operator-(const qmat& x, const qmat& y) {
    qmat r(x.n);
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
  }
  friend bool operator==(const qmat& x, const qmat& y) {
    return x.n == y.n && x.a == y.a;
  }

  qmat scaled(const rat& c) const {
    qmat r = *this;
    for (auto& v : r.a) v = v * c;
    return r;
  }

  rat trace() const {
    rat t;
    for (int i = 0; i < n; ++i) t = t + (*this)(i, i);
    return t;
  }

  rat det() const {
    if (n == 1) return a[0];
    if (n == 2) return (*this)(0, 0) * (*this)(1, 1) - (*this)(0, 1) * (*this)(1, 0);
    if (n == 3) {
      const qmat& m = *this;
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
             m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    }
    throw budget_exceeded("qmat::det: n > 3");
  }

  qmat inverse() const {
    rat d = det();
    if (d.is_zero()) throw error(errc::domain, "qmat: singular");
    qmat adj(n);
    if (n == 1) {
      adj(0, 0) = rat(1);
    } else if (n == 2) {
      adj(0, 0) = (*this)(1, 1);
      adj(0, 1) = -(*this)(0, 1);
      adj(1, 0) = -(*this)(1, 0);
      adj(1, 1) = (*this)(0, 0);
    } else if (n == 3) {
      const qmat& m = *this;
      auto co = [&](int i, int j) {
        int r0 = (i + 1) % 3, r1 = (i + 2) % 3, c0 = (j + 1) % 3,
            c1 = (j + 2) % 3;
        if (r0 > r1) std::swap(r0, r1);
        if (c0 > c1) std::swap(c0, c1);
        rat minor = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
        return ((i + j) % 2 == 0) ? minor : -minor;
      };
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) adj(i, j) = co(j, i);
    } else {
      throw budget_exceeded("qmat::inverse: n > 3");
    }
    return adj.scaled(rat(1) / d);
  }

  // Characteristic polynomial coefficients c_0..c_n (monic, c_n = 1),
  // for n <= 3.
  std::vector<rat> charpoly() const {
    std::vector<rat> c(n + 1);
    c[n] = rat(1);
    if (n == 1) {
      c[0] = -a[0];
    } else if (n == 2) {
      c[1] = -trace();
      c[0] = det();
    } else if (n == 3) {
      const qmat& m = *this;
      rat s2 = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) +
               (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) +
               (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1));
      c[2] = -trace();
      c[1] = s2;
      c[0] = -det();
    } else {
      throw budget_exceeded("qmat::charpoly: n > 3");
    }
    return c;
  }
};

}  // namespace btchar
