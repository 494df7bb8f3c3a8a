#pragma once

#include <array>
#include <vector>

#include "btchar/intutil.hpp"

namespace btchar {

// Arithmetic tables for a small finite field GF(p^f).  Elements are encoded
// as integers in [0, q): the element sum c_i t^i has code sum c_i p^i, where
// t is the class of x modulo the (deterministically chosen) defining
// polynomial.  For f = 1 the code is just the residue.
class gfq {
 public:
  gfq(i64 p, int f) : p_(p), f_(f), q_(ipow(p, f)) {
    if (q_ > 4096) throw budget_exceeded("gfq: field too large");
    choose_defining_poly();
    build_tables();
  }

  i64 p() const { return p_; }
  int f() const { return f_; }
  i64 q() const { return q_; }

  i64 add(i64 a, i64 b) const {
    i64 r = 0, mul = 1;
    for (int i = 0; i < f_; ++i) {
      r += ((a % p_ + b % p_) % p_) * mul;
      a /= p_;
      b /= p_;
      mul *= p_;
    }
    return r;
  }
  i64 neg(i64 a) const {
    i64 r = 0, mul = 1;
    for (int i = 0; i < f_; ++i) {
      r += ((p_ - a % p_) % p_) * mul;
      a /= p_;
      mul *= p_;
    }
    return r;
  }
  i64 sub(i64 a, i64 b) const { return add(a, neg(b)); }
  i64 mul(i64 a, i64 b) const { return mul_[a * q_ + b]; }
  i64 inv(i64 a) const {
    if (a == 0) throw error(errc::domain, "gfq: inverse of zero");
    return inv_[a];
  }
  i64 pow(i64 a, i64 e) const {
    if (a == 0) return e == 0 ? 1 : 0;
    e = mod_pos(e, q_ - 1);
    i64 r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  // Fixed generator of the multiplicative group and its discrete log.
  i64 generator() const { return gen_; }
  i64 dlog(i64 a) const {
    if (a == 0) throw error(errc::domain, "gfq: dlog of zero");
    return dlog_[a];
  }

  // Embedding of the prime field: residue r -> code r.
  i64 from_prime(i64 r) const { return mod_pos(r, p_); }

  // Defining polynomial coefficients c_0..c_{f} (monic) over F_p.
  const std::vector<i64>& defining_poly() const { return def_; }

  // Frobenius x -> x^p.
  i64 frob(i64 a) const { return pow(a, p_); }

  // Trace to the prime field, returned as a residue in [0, p).
  i64 trace(i64 a) const {
    i64 s = 0, x = a;
    for (int i = 0; i < f_; ++i) {
      s = add(s, x);
      x = frob(x);
    }
    return s;  // lies in the prime subfield, code < p
  }

 private:
  void choose_defining_poly() {
    def_.assign(f_ + 1, 0);
    def_[f_] = 1;
    if (f_ == 1) return;
    // smallest irreducible monic polynomial in lexicographic coefficient order
    for (i64 code = 0; code < ipow(p_, f_); ++code) {
      std::vector<i64> c(f_ + 1);
      i64 t = code;
      for (int i = 0; i < f_; ++i) {
        c[i] = t % p_;
        t /= p_;
      }
      c[f_] = 1;
      if (poly_irreducible(c)) {
        def_ = c;
        return;
      }
    }
    throw error(errc::domain, "gfq: no irreducible polynomial found");
  }

  bool poly_irreducible(const std::vector<i64>& c) const {
    // no roots (f<=3 so degree <= 3: root-free == irreducible)
    for (i64 x = 0; x < p_; ++x) {
      i64 v = 0;
      for (int i = f_; i >= 0; --i) v = mod_pos(v * x + c[i], p_);
      if (v == 0) return false;
    }
    if (f_ >= 4) throw budget_exceeded("gfq: degree > 3 not supported");
    return true;
  }

  void build_tables() {
    mul_.assign(q_ * q_, 0);
    for (i64 a = 0; a < q_; ++a)
      for (i64 b = 0; b < q_; ++b) mul_[a * q_ + b] = poly_mul(a, b);
    inv_.assign(q_, 0);
    for (i64 a = 1; a < q_; ++a)
      for (i64 b = 1; b < q_; ++b)
        if (mul_[a * q_ + b] == 1) {
          inv_[a] = b;
          break;
        }
    // generator: smallest code of maximal order
    dlog_.assign(q_, 0);
    for (i64 g = 1; g < q_; ++g) {
      i64 x = g;
      i64 ord = 1;
      while (x != 1) {
        x = mul_[x * q_ + g];
        ++ord;
      }
      if (ord == q_ - 1) {
        gen_ = g;
        i64 y = 1;
        for (i64 k = 0; k < q_ - 1; ++k) {
          dlog_[y] = k;
          y = mul_[y * q_ + g];
        }
        return;
      }
    }
    throw error(errc::domain, "gfq: no generator");
  }

  i64 poly_mul(i64 a, i64 b) const {
    std::array<i64, 8> prod{};
    std::array<i64, 4> ca{}, cb{};
    for (int i = 0; i < f_; ++i) {
      ca[i] = a % p_;
      a /= p_;
      cb[i] = b % p_;
      b /= p_;
    }
    for (int i = 0; i < f_; ++i)
      for (int j = 0; j < f_; ++j) prod[i + j] += ca[i] * cb[j];
    // reduce modulo defining polynomial
    for (int d = 2 * f_ - 2; d >= f_; --d) {
      i64 c = mod_pos(prod[d], p_);
      if (c) {
        for (int i = 0; i < f_; ++i)
          prod[d - f_ + i] = mod_pos(prod[d - f_ + i] - c * def_[i], p_);
      }
      prod[d] = 0;
    }
    i64 r = 0, mulp = 1;
    for (int i = 0; i < f_; ++i) {
      r += mod_pos(prod[i], p_) * mulp;
      mulp *= p_;
    }
    return r;
  }

  i64 p_;
  int f_;
  i64 q_;
  i64 gen_ = 1;
  std::vector<i64> def_;
  std::vector<i64> mul_, inv_, dlog_;
};

}  // namespace btchar
