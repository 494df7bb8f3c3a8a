#pragma once

#include <map>
#include <string>
#include <vector>

#include "btchar/intutil.hpp"

namespace btchar {

// m-th cyclotomic polynomial, monic integer coefficients ascending.
inline std::vector<i64> cyclotomic_poly(i64 m) {
  static std::map<i64, std::vector<i64>> memo;
  auto it = memo.find(m);
  if (it != memo.end()) return it->second;
  // x^m - 1
  std::vector<i64> num(m + 1, 0);
  num[0] = -1;
  num[m] = 1;
  auto divide_exact = [](std::vector<i64> f, const std::vector<i64>& g) {
    // f / g for monic g, exact
    int dg = int(g.size()) - 1;
    std::vector<i64> q(f.size() - dg, 0);
    for (int i = int(f.size()) - 1; i >= dg; --i) {
      i64 c = f[i];
      if (c == 0) continue;
      q[i - dg] = c;
      for (int j = 0; j <= dg; ++j) f[i - dg + j] -= mul_i64(c, g[j]);
    }
    for (int i = 0; i < dg; ++i)
      if (f[i] != 0) throw error(errc::domain, "cyclotomic: inexact division");
    return q;
  };
  for (i64 d = 1; d < m; ++d)
    if (m % d == 0) num = divide_exact(num, cyclotomic_poly(d));
  memo[m] = num;
  return num;
}

// Exact arithmetic in Z[x] / Phi_m(x); values represent elements of Z[zeta_m]
// in the power basis 1, zeta, ..., zeta^{phi(m)-1}.
class cyc_ring {
 public:
  using val = std::vector<i64>;

  explicit cyc_ring(i64 m) : m_(m), phi_(cyclotomic_poly(m)) {
    d_ = int(phi_.size()) - 1;
    // x^e mod Phi_m for all e < m
    xpow_.assign(m_, val(d_, 0));
    val cur(d_, 0);
    cur[0] = 1;
    for (i64 e = 0; e < m_; ++e) {
      xpow_[e] = cur;
      // multiply by x
      val nxt(d_ + 1, 0);
      for (int i = 0; i < d_; ++i) nxt[i + 1] = cur[i];
      i64 lead = nxt[d_];
      if (lead != 0)
        for (int i = 0; i < d_; ++i) nxt[i] -= mul_i64(lead, phi_[i]);
      nxt.resize(d_);
      cur = nxt;
    }
  }

  i64 m() const { return m_; }
  int degree() const { return d_; }

  val zero() const { return val(d_, 0); }
  val one() const { return from_int(1); }
  val from_int(i64 n) const {
    val v(d_, 0);
    v[0] = n;
    return v;
  }
  val zeta(i64 k) const { return xpow_[mod_pos(k, m_)]; }

  val add(const val& a, const val& b) const {
    val r(d_);
    for (int i = 0; i < d_; ++i) r[i] = a[i] + b[i];
    return r;
  }
  val sub(const val& a, const val& b) const {
    val r(d_);
    for (int i = 0; i < d_; ++i) r[i] = a[i] - b[i];
    return r;
  }
  val neg(const val& a) const {
    val r(d_);
    for (int i = 0; i < d_; ++i) r[i] = -a[i];
    return r;
  }
  val scal(const val& a, i64 c) const {
    val r(d_);
    for (int i = 0; i < d_; ++i) r[i] = mul_i64(a[i], c);
    return r;
  }
  val mul(const val& a, const val& b) const {
    std::vector<i64> prod(2 * d_ - 1, 0);
    for (int i = 0; i < d_; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < d_; ++j)
        prod[i + j] = checked_i64(i128(prod[i + j]) + i128(a[i]) * b[j], "cyc");
    }
    for (int t = 2 * d_ - 2; t >= d_; --t) {
      i64 lead = prod[t];
      if (lead != 0)
        for (int i = 0; i < d_; ++i)
          prod[t - d_ + i] =
              checked_i64(i128(prod[t - d_ + i]) - i128(lead) * phi_[i], "cyc");
      prod[t] = 0;
    }
    prod.resize(d_);
    return prod;
  }

  // complex conjugation: zeta -> zeta^{-1}
  val conj(const val& a) const {
    val r = zero();
    for (int j = 0; j < d_; ++j) {
      if (a[j] == 0) continue;
      r = add(r, scal(xpow_[mod_pos(-j, m_)], a[j]));
    }
    return r;
  }

  bool is_zero(const val& a) const {
    for (i64 c : a)
      if (c != 0) return false;
    return true;
  }
  bool is_int(const val& a, i64& out) const {
    for (int i = 1; i < d_; ++i)
      if (a[i] != 0) return false;
    out = a[0];
    return true;
  }

  // value of a at zeta_m -> t (an element of F_l with t^m = 1), used to
  // cross-check the modular and exact routes
  i64 eval_mod(const val& a, i64 t, i64 ell) const {
    i64 r = 0, x = 1;
    for (int i = 0; i < d_; ++i) {
      r = mod_pos(r + mulmod(mod_pos(a[i], ell), x, ell), ell);
      x = mulmod(x, t, ell);
    }
    return r;
  }

  std::string str(const val& a) const {
    std::string s = "[";
    for (int i = 0; i < d_; ++i) {
      if (i) s += ",";
      s += std::to_string(a[i]);
    }
    return s + "]";
  }

 private:
  i64 m_;
  std::vector<i64> phi_;
  int d_;
  std::vector<val> xpow_;
};

// Image of a value from Z[zeta_m] in Z[zeta_M] for m | M: zeta_m -> zeta_M^{M/m}.
inline cyc_ring::val embed_cyc(const cyc_ring& from, const cyc_ring& to,
                               const cyc_ring::val& a) {
  if (to.m() % from.m() != 0)
    throw error(errc::domain, "embed_cyc: target order not a multiple");
  i64 step = to.m() / from.m();
  auto r = to.zero();
  for (int j = 0; j < from.degree(); ++j) {
    if (a[j] == 0) continue;
    r = to.add(r, to.scal(to.zeta(step * j), a[j]));
  }
  return r;
}

}  // namespace btchar
