#pragma once

#include <string>
#include <vector>

#include "btchar/matz.hpp"

namespace btchar {

// A Z_p-lattice in Q_p^n, stored as  p^{-denom} * span_{Z_p}(B)  with B an
// integer matrix in p-saturated Hermite form (upper triangular, p-power
// diagonal).  The representation is canonical: equal lattices have equal
// (B, denom).
class lattice {
 public:
  lattice() = default;

  static lattice standard(i64 p, int n) {
    lattice L;
    L.p_ = p;
    L.n_ = n;
    L.B_ = mat::identity(n);
    L.denom_ = 0;
    return L;
  }

  // Lattice spanned over Z_p by the columns of an integer matrix (must have
  // full rank), divided by p^denom.
  static lattice from_columns(i64 p, const mat& cols, int denom = 0) {
    lattice L;
    L.p_ = p;
    L.n_ = cols.rows;
    L.B_ = saturate(p, cols);
    L.denom_ = denom;
    L.canonicalize();
    return L;
  }

  i64 p() const { return p_; }
  int n() const { return n_; }
  const mat& basis() const { return B_; }
  int denom() const { return denom_; }

  // Basis as a rational matrix (columns generate the lattice).
  qmat basis_q() const { return qmat(B_, ipow(p_, denom_)); }

  friend bool operator==(const lattice& a, const lattice& b) {
    return a.p_ == b.p_ && a.n_ == b.n_ && a.denom_ == b.denom_ && a.B_ == b.B_;
  }
  friend bool operator!=(const lattice& a, const lattice& b) { return !(a == b); }
  friend bool operator<(const lattice& a, const lattice& b) {
    if (a.denom_ != b.denom_) return a.denom_ < b.denom_;
    return a.B_.a < b.B_.a;
  }

  // v_p(det), i.e. minus the "size": index valuation relative to Z_p^n.
  int det_val() const {
    int v = 0;
    for (int i = 0; i < n_; ++i) v += vp(B_(i, i), p_);
    return v - n_ * denom_;
  }

  bool contains(const std::vector<rat>& x) const {
    // solve B y = p^denom x, y must be p-integral
    std::vector<rat> v(n_);
    i64 pd = ipow(p_, denom_);
    for (int i = 0; i < n_; ++i) v[i] = x[i] * rat(pd);
    std::vector<rat> y(n_);
    for (int i = n_ - 1; i >= 0; --i) {
      rat s = v[i];
      for (int j = i + 1; j < n_; ++j) s = s - rat(B_(i, j)) * y[j];
      y[i] = s / rat(B_(i, i));
      if (y[i].val(p_) < 0) return false;
    }
    return true;
  }

  bool contains(const lattice& other) const {
    for (int j = 0; j < n_; ++j) {
      std::vector<rat> col(n_);
      i64 pd = ipow(other.p_, other.denom_);
      for (int i = 0; i < n_; ++i) col[i] = rat(other.B_(i, j), pd);
      if (!contains(col)) return false;
    }
    return true;
  }

  lattice scaled_p(int k) const {  // multiply the lattice by p^k
    lattice L = *this;
    L.denom_ -= k;
    if (L.denom_ < 0) {
      L.B_ = L.B_.scaled(ipow(p_, -L.denom_));
      L.denom_ = 0;
    }
    L.canonicalize();
    return L;
  }

  friend lattice operator+(const lattice& a, const lattice& b) {
    int d = std::max(a.denom_, b.denom_);
    mat J(a.n_, 2 * a.n_);
    i64 sa = ipow(a.p_, d - a.denom_), sb = ipow(b.p_, d - b.denom_);
    for (int i = 0; i < a.n_; ++i)
      for (int j = 0; j < a.n_; ++j) {
        J(i, j) = mul_i64(a.B_(i, j), sa);
        J(i, a.n_ + j) = mul_i64(b.B_(i, j), sb);
      }
    return from_columns(a.p_, hnf(J), d);
  }

  friend lattice intersect(const lattice& a, const lattice& b) {
    int d = std::max(a.denom_, b.denom_);
    i64 sa = ipow(a.p_, d - a.denom_), sb = ipow(b.p_, d - b.denom_);
    mat J(a.n_, 2 * a.n_);
    for (int i = 0; i < a.n_; ++i)
      for (int j = 0; j < a.n_; ++j) {
        J(i, j) = mul_i64(a.B_(i, j), sa);
        J(i, a.n_ + j) = -mul_i64(b.B_(i, j), sb);
      }
    mat K = int_kernel(J);  // 2n x k, k should be n
    if (K.cols != a.n_) throw error(errc::domain, "intersect: bad kernel rank");
    mat X(a.n_, a.n_);
    for (int i = 0; i < a.n_; ++i)
      for (int j = 0; j < a.n_; ++j) X(i, j) = K(i, j);
    mat Ba = a.B_.scaled(sa);
    return from_columns(a.p_, Ba * X, d);
  }

  // Image under an invertible rational matrix.
  lattice apply(const qmat& g) const {
    qmat R = g * basis_q();
    i64 D = 1;
    for (const auto& e : R.a) D = std::lcm(D, e.d);
    mat M(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        rat v = R(i, j) * rat(D);
        if (!v.is_integer()) throw error(errc::domain, "apply: lcm failed");
        M(i, j) = v.n;
      }
    int s = vp(D, p_);
    return from_columns(p_, M, s);
  }

  // Canonical representative of the homothety class: scaled so denom = 0 and
  // not every basis entry is divisible by p.
  lattice homothety_rep() const {
    lattice L = *this;
    L.denom_ = 0;
    int mv = infinity_vp;
    for (i64 v : L.B_.a)
      if (v != 0) mv = std::min(mv, vp(v, p_));
    if (mv > 0 && mv != infinity_vp) {
      i64 q = ipow(p_, mv);
      for (auto& v : L.B_.a) v /= q;
    }
    return L;
  }

  std::string homothety_key() const {
    lattice L = homothety_rep();
    std::string s;
    for (i64 v : L.B_.a) {
      s += std::to_string(v);
      s += ',';
    }
    return s;
  }

  // Elementary divisor exponents relative to Z_p^n (sorted ascending).
  std::vector<int> divisor_exponents() const {
    std::vector<int> e;
    for (int i = 0; i < n_; ++i) e.push_back(vp(B_(i, i), p_) - denom_);
    std::sort(e.begin(), e.end());
    return e;
  }

 private:
  void canonicalize() {
    while (denom_ > 0) {
      bool all = true;
      for (i64 v : B_.a)
        if (v % p_ != 0) {
          all = false;
          break;
        }
      if (!all) break;
      for (auto& v : B_.a) v /= p_;
      --denom_;
    }
  }

  // Replace an arbitrary full-rank integer column span by the canonical
  // basis of its Z_p-span: append a p-power scalar tail and re-reduce.
  static mat saturate(i64 p, const mat& cols) {
    mat H = hnf(cols);
    if (H.cols != H.rows) throw error(errc::domain, "lattice: rank deficient");
    int T = 0;
    for (int i = 0; i < H.rows; ++i) T += vp(H(i, i), p);
    i64 pT = ipow(p, T);
    mat J(H.rows, 2 * H.rows);
    for (int i = 0; i < H.rows; ++i) {
      for (int j = 0; j < H.cols; ++j) J(i, j) = H(i, j);
      J(i, H.cols + i) = pT;
    }
    return hnf(J);
  }

  i64 p_ = 0;
  int n_ = 0;
  mat B_;
  int denom_ = 0;
};

// Basis of L adapted to a sublattice M with pL <= M <= L (or more generally
// M <= L with p-power elementary divisors): returns column vectors u_j of L
// (as a rational matrix) and exponents a_j with M = span(p^{a_j} u_j).
struct adapted_basis_result {
  qmat U;                // columns form a basis of L
  std::vector<int> exp;  // p-exponents for M
};

inline adapted_basis_result adapted_basis(const lattice& L, const lattice& M) {
  qmat C = L.basis_q().inverse() * M.basis_q();
  i64 D = 1;
  for (const auto& e : C.a) D = std::lcm(D, e.d);
  if (vp(D, L.p()) != 0)
    throw error(errc::domain, "adapted_basis: M not contained in L");
  mat Ci(L.n(), L.n());
  for (int i = 0; i < L.n(); ++i)
    for (int j = 0; j < L.n(); ++j) {
      rat v = C(i, j) * rat(D);
      Ci(i, j) = v.n;
    }
  auto sm = smith_span(Ci);
  adapted_basis_result res;
  res.U = L.basis_q() * qmat(sm.W);
  for (i64 d : sm.d) res.exp.push_back(vp(d < 0 ? -d : d, L.p()));
  return res;
}

}  // namespace btchar
