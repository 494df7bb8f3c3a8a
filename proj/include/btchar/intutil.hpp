#pragma once

#include <cassert>
#include <cstdint>
#include <numeric>
#include <string>

#include "btchar/errors.hpp"

namespace btchar {

using i64 = std::int64_t;
using i128 = __int128;

inline i64 checked_i64(i128 v, const char* where = "") {
  if (v > i128(INT64_MAX) || v < i128(INT64_MIN))
    throw error(errc::budget, std::string("integer overflow in ") + where);
  return static_cast<i64>(v);
}

inline i64 mul_i64(i64 a, i64 b) { return checked_i64(i128(a) * b, "mul"); }

inline i64 ipow(i64 b, int e) {
  i128 r = 1;
  for (int i = 0; i < e; ++i) {
    r *= b;
    if (r > i128(INT64_MAX)) throw error(errc::budget, "ipow overflow");
  }
  return static_cast<i64>(r);
}

inline i64 gcd64(i64 a, i64 b) { return std::gcd(a, b); }

// g = ax + by, g >= 0.
inline i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
  if (b == 0) {
    x = (a >= 0) ? 1 : -1;
    y = 0;
    return a >= 0 ? a : -a;
  }
  i64 x1, y1;
  i64 g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

inline i64 mod_pos(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline i64 mulmod(i64 a, i64 b, i64 m) {
  return static_cast<i64>((i128(a) * b) % m);
}

inline i64 powmod(i64 b, i64 e, i64 m) {
  b = mod_pos(b, m);
  i64 r = 1 % m;
  while (e > 0) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

inline i64 invmod(i64 a, i64 m) {
  i64 x, y;
  i64 g = ext_gcd(mod_pos(a, m), m, x, y);
  if (g != 1) throw error(errc::domain, "invmod: not invertible");
  return mod_pos(x, m);
}

inline bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// p-adic valuation of a nonzero integer; v(0) is reported as `infinity_vp`.
inline constexpr int infinity_vp = INT32_MAX;

inline int vp(i64 a, i64 p) {
  if (a == 0) return infinity_vp;
  int v = 0;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

// Exact rational with i64 numerator/denominator, always normalized with
// positive denominator.  Arithmetic throws on overflow rather than wrapping.
struct rat {
  i64 n = 0, d = 1;

  rat() = default;
  rat(i64 num) : n(num), d(1) {}
  rat(i64 num, i64 den) : n(num), d(den) { normalize(); }

  void normalize() {
    if (d == 0) throw error(errc::domain, "rat: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    i64 g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
  }

  bool is_zero() const { return n == 0; }
  bool is_integer() const { return d == 1; }

  friend rat operator+(const rat& a, const rat& b) {
    i128 num = i128(a.n) * b.d + i128(b.n) * a.d;
    i128 den = i128(a.d) * b.d;
    return make(num, den);
  }
  friend rat operator-(const rat& a, const rat& b) { return a + rat(-b.n, b.d); }
  friend rat operator-(const rat& a) { return rat(-a.n, a.d); }
  friend rat operator*(const rat& a, const rat& b) {
    return make(i128(a.n) * b.n, i128(a.d) * b.d);
  }
  friend rat operator/(const rat& a, const rat& b) {
    if (b.n == 0) throw error(errc::domain, "rat: divide by zero");
    return make(i128(a.n) * b.d, i128(a.d) * b.n);
  }
  friend bool operator==(const rat& a, const rat& b) {
    return a.n == b.n && a.d == b.d;
  }
  friend bool operator!=(const rat& a, const rat& b) { return !(a == b); }
  friend bool operator<(const rat& a, const rat& b) {
    return i128(a.n) * b.d < i128(b.n) * a.d;
  }

  // p-adic valuation of the rational.
  int val(i64 p) const {
    if (n == 0) return infinity_vp;
    return vp(n, p) - vp(d, p);
  }

  std::string str() const {
    if (d == 1) return std::to_string(n);
    return std::to_string(n) + "/" + std::to_string(d);
  }

  static rat make(i128 num, i128 den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    i128 a = num < 0 ? -num : num;
    i128 b = den;
    while (b) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
    rat r;
    r.n = checked_i64(num, "rat");
    r.d = checked_i64(den, "rat");
    return r;
  }
};

}  // namespace btchar
