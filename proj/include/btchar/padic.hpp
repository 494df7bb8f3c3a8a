#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "btchar/gfq.hpp"
#include "btchar/intutil.hpp"

namespace btchar {

struct ef_pair {
  int e = 1;  // ramification index
  int f = 1;  // residue degree
};

// Descriptor of F = Q_p, or of a monogenic extension E = F[x]/(g), together
// with the working precision: all arithmetic is exact modulo p^k.
class local_field {
 public:
  local_field(i64 p, int k) : p_(p), k_(k) { validate(); }
  local_field(i64 p, int k, std::vector<i64> defining_poly)
      : p_(p), k_(k), ext_(std::move(defining_poly)) {
    validate();
  }

  i64 p() const { return p_; }
  int precision() const { return k_; }
  i64 pk() const { return ipow(p_, k_); }
  bool is_extension() const { return !ext_.empty(); }
  int degree() const { return ext_.empty() ? 1 : int(ext_.size()) - 1; }
  const std::vector<i64>& defining_poly() const { return ext_; }

  // e/f of the extension over Q_p (1,1 for the base field).  Computed lazily
  // by the certified analysis in this header.
  ef_pair ef() const;

 private:
  void validate() const {
    if (!is_prime(p_)) throw error(errc::schema, "local_field: p not prime");
    if (k_ < 1) throw error(errc::schema, "local_field: precision < 1");
    if (ipow(p_, k_) > (i64(1) << 61))
      throw budget_exceeded("local_field: p^k too large for exact arithmetic");
    if (!ext_.empty()) {
      if (ext_.back() != 1)
        throw error(errc::schema, "local_field: defining polynomial not monic");
      if (ext_.size() < 2)
        throw error(errc::schema, "local_field: defining polynomial constant");
    }
  }

  i64 p_;
  int k_;
  std::vector<i64> ext_;
  mutable std::optional<ef_pair> ef_cache_;
  friend class padic;
  friend ef_pair field_ef(const local_field&);
};

// Truncated-precision element of a local field.  Value is
// (sum_i c_i beta^i) / p^shift with c_i known modulo p^k; the element itself
// is therefore known modulo p^{k - shift}.
class padic {
 public:
  padic() = default;
  padic(std::shared_ptr<const local_field> F, i64 integer)
      : F_(std::move(F)), c_(F_->degree(), 0), shift_(0) {
    c_[0] = mod_pos(integer, F_->pk());
    exact_zero_ = (integer == 0);
  }
  padic(std::shared_ptr<const local_field> F, const rat& r)
      : F_(std::move(F)), c_(F_->degree(), 0) {
    i64 den = r.d;
    shift_ = vp(den, F_->p());
    i64 unit_den = den / ipow(F_->p(), shift_);
    i64 pk = F_->pk();
    c_[0] = mulmod(mod_pos(r.n, pk), invmod(unit_den, pk), pk);
    exact_zero_ = (r.n == 0);
  }
  static padic from_coeffs(std::shared_ptr<const local_field> F,
                           std::vector<i64> coeffs, int shift = 0) {
    padic x;
    x.F_ = std::move(F);
    x.c_.assign(x.F_->degree(), 0);
    for (size_t i = 0; i < coeffs.size() && i < x.c_.size(); ++i)
      x.c_[i] = mod_pos(coeffs[i], x.F_->pk());
    x.shift_ = shift;
    bool z = true;
    for (i64 v : coeffs)
      if (v != 0) z = false;
    x.exact_zero_ = z;
    return x;
  }

  const std::shared_ptr<const local_field>& field() const { return F_; }
  int shift() const { return shift_; }
  const std::vector<i64>& coeffs() const { return c_; }
  bool exact_zero() const { return exact_zero_; }

  // Precision (in powers of p) to which the element itself is known.
  int known_precision() const { return F_->precision() - shift_; }

  // Certified valuation.  For the base field this is v_p of the coefficient;
  // for an extension it is the normalized valuation v_E computed through the
  // norm resultant.  Returns nullopt when the truncated representative
  // vanishes (valuation >= known precision, not certifiable) unless the
  // element is an exact zero, in which case +infinity is certified.
  std::optional<int> valuation() const {
    if (exact_zero_) return infinity_vp;
    i64 res = norm_rep();
    if (mod_pos(res, F_->pk()) == 0) return std::nullopt;
    int vres = vp(mod_pos(res, F_->pk()), F_->p());
    int n = F_->degree();
    ef_pair ef = F_->ef();
    // v_E(x) = e * v_F(Norm(x)) / n, with the shift removed afterwards
    i64 num = i64(ef.e) * vres;
    if (num % n != 0)
      throw error(errc::domain, "padic: inconsistent norm valuation");
    return int(num / n) - shift_ * ef.e;
  }
  bool valuation_certified() const { return valuation().has_value(); }

  friend padic operator+(const padic& a, const padic& b) {
    auto [x, y] = align(a, b);
    i64 pk = x.F_->pk();
    padic r = x;
    for (size_t i = 0; i < r.c_.size(); ++i)
      r.c_[i] = mod_pos(x.c_[i] + y.c_[i], pk);
    r.exact_zero_ = a.exact_zero_ && b.exact_zero_;
    return r;
  }
  friend padic operator-(const padic& a, const padic& b) {
    auto [x, y] = align(a, b);
    i64 pk = x.F_->pk();
    padic r = x;
    for (size_t i = 0; i < r.c_.size(); ++i)
      r.c_[i] = mod_pos(x.c_[i] - y.c_[i], pk);
    r.exact_zero_ = a.exact_zero_ && b.exact_zero_;
    return r;
  }
  friend padic operator*(const padic& a, const padic& b) {
    int d = a.F_->degree();
    i64 pk = a.F_->pk();
    std::vector<i64> prod(2 * d - 1, 0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        prod[i + j] = mod_pos(prod[i + j] + mulmod(a.c_[i], b.c_[j], pk), pk);
    // reduce modulo the defining polynomial
    if (d > 1) {
      const auto& g = a.F_->defining_poly();
      for (int t = 2 * d - 2; t >= d; --t) {
        i64 lead = prod[t];
        if (lead) {
          for (int i = 0; i < d; ++i)
            prod[t - d + i] =
                mod_pos(prod[t - d + i] - mulmod(lead, g[i], pk), pk);
        }
        prod[t] = 0;
      }
    }
    prod.resize(d);
    padic r = from_coeffs(a.F_, prod, a.shift_ + b.shift_);
    r.exact_zero_ = a.exact_zero_ || b.exact_zero_;
    return r;
  }

  // Multiply by p^t (t may be negative: raises shift).
  padic times_p(int t) const {
    padic r = *this;
    if (t >= 0) {
      i64 pt = ipow(F_->p(), t);
      for (auto& v : r.c_) v = mulmod(v, pt, F_->pk());
    } else {
      r.shift_ -= t;
    }
    return r;
  }

  // Reduction modulo p of the (integral) coefficient vector: divides out the
  // shift first, which must be possible exactly.
  std::vector<i64> residue_coeffs() const {
    std::vector<i64> out(c_.size());
    i64 ps = ipow(F_->p(), shift_);
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] % ps != 0)
        throw negative_valuation("padic: non-integral element");
      out[i] = mod_pos(c_[i] / ps, F_->p());
    }
    return out;
  }

 private:
  static std::pair<padic, padic> align(const padic& a, const padic& b) {
    padic x = a, y = b;
    int s = std::max(a.shift_, b.shift_);
    x = x.times_p(x.shift_ - s).with_shift(s);
    y = y.times_p(y.shift_ - s).with_shift(s);
    return {x, y};
  }
  padic with_shift(int s) const {
    padic r = *this;
    r.shift_ = s;
    return r;
  }

  // Integer representative of the norm (resultant of the defining polynomial
  // with the coefficient polynomial), modulo p^k.
  i64 norm_rep() const {
    int d = F_->degree();
    i64 pk = F_->pk();
    if (d == 1) return mod_pos(c_[0], pk);
    // Sylvester matrix of g (degree d) and the coefficient poly (degree < d)
    int m = d - 1;
    while (m > 0 && c_[m] == 0) --m;
    int N = d + m;
    std::vector<std::vector<i64>> S(N, std::vector<i64>(N, 0));
    const auto& g = F_->defining_poly();
    for (int r = 0; r < m; ++r)
      for (int i = 0; i <= d; ++i) S[r][r + i] = mod_pos(g[d - i], pk);
    for (int r = 0; r < d; ++r)
      for (int i = 0; i <= m; ++i) S[m + r][r + i] = mod_pos(c_[m - i], pk);
    // determinant mod p^k by fraction-free elimination is awkward in a
    // non-field; use exact cofactor expansion (N <= 5 at desk scale)
    if (N > 6) throw budget_exceeded("padic: resultant degree too large");
    return det_mod(S, N, pk);
  }

  static i64 det_mod(const std::vector<std::vector<i64>>& M, int N, i64 pk) {
    if (N == 1) return M[0][0];
    std::vector<std::vector<i64>> sub(N - 1, std::vector<i64>(N - 1));
    i64 acc = 0;
    for (int c = 0; c < N; ++c) {
      if (M[0][c] == 0) continue;
      for (int i = 1; i < N; ++i) {
        int jj = 0;
        for (int j = 0; j < N; ++j) {
          if (j == c) continue;
          sub[i - 1][jj++] = M[i][j];
        }
      }
      i64 minor = det_mod(sub, N - 1, pk);
      i64 term = mulmod(M[0][c], minor, pk);
      acc = mod_pos(acc + ((c % 2) ? -term : term), pk);
    }
    return acc;
  }

  std::shared_ptr<const local_field> F_;
  std::vector<i64> c_;
  int shift_ = 0;
  bool exact_zero_ = true;
};

// ---------------------------------------------------------------------------
// Polynomials over Q_p (base field only) and their certified analysis.

// Coefficients ascending, exact rationals; the prime comes with the field.
struct ppoly {
  std::shared_ptr<const local_field> F;
  std::vector<rat> c;  // c[0] + c[1] x + ...

  int deg() const { return int(c.size()) - 1; }
  bool monic() const { return !c.empty() && c.back() == rat(1); }
};

struct newton_segment {
  rat slope;   // common valuation of the roots on this segment
  int length;  // number of roots
};

struct newton_polygon_t {
  std::vector<newton_segment> segments;  // slopes strictly increasing
};

// Lower convex hull of (i, val a_i); slopes reported in the root-valuation
// convention (negatives of the geometric hull slopes), strictly increasing.
inline newton_polygon_t newton_polygon(const ppoly& P) {
  if (!P.monic()) throw error(errc::domain, "newton_polygon: not monic");
  int n = P.deg();
  i64 p = P.F->p();
  std::vector<std::pair<int, rat>> pts;
  for (int i = 0; i <= n; ++i) {
    if (P.c[i].is_zero()) continue;
    pts.push_back({i, rat(P.c[i].val(p))});
  }
  // lower hull, left to right
  std::vector<std::pair<int, rat>> hull;
  for (auto& pt : pts) {
    while (hull.size() >= 2) {
      auto& a = hull[hull.size() - 2];
      auto& b = hull[hull.size() - 1];
      // drop b if it is above segment a--pt
      rat lhs = (b.second - a.second) * rat(pt.first - a.first);
      rat rhs = (pt.second - a.second) * rat(b.first - a.first);
      if (rhs < lhs || rhs == lhs)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(pt);
  }
  newton_polygon_t np;
  for (size_t i = 0; i + 1 < hull.size(); ++i) {
    rat s = (hull[i].second - hull[i + 1].second) /
            rat(hull[i + 1].first - hull[i].first);
    np.segments.push_back({s, hull[i + 1].first - hull[i].first});
  }
  std::reverse(np.segments.begin(), np.segments.end());
  for (size_t i = 0; i + 1 < np.segments.size(); ++i)
    if (!(np.segments[i].slope < np.segments[i + 1].slope))
      throw error(errc::domain, "newton_polygon: slopes not increasing");
  return np;
}

namespace detail {

// Factor a monic polynomial over F_p by brute force (desk-scale degrees).
// Returns list of (irreducible factor coefficients ascending, multiplicity).
inline std::vector<std::pair<std::vector<i64>, int>> factor_fp(
    std::vector<i64> c, i64 p) {
  auto normalize = [&](std::vector<i64>& v) {
    for (auto& x : v) x = mod_pos(x, p);
    while (v.size() > 1 && v.back() == 0) v.pop_back();
  };
  normalize(c);
  // make monic
  if (c.back() != 1) {
    i64 inv = invmod(c.back(), p);
    for (auto& x : c) x = mulmod(x, inv, p);
  }
  std::vector<std::pair<std::vector<i64>, int>> out;
  auto divide = [&](const std::vector<i64>& f, const std::vector<i64>& g,
                    std::vector<i64>& q) -> bool {
    // exact division of monic polys over F_p
    std::vector<i64> r = f;
    int dg = int(g.size()) - 1;
    q.assign(f.size() >= g.size() ? f.size() - g.size() + 1 : 0, 0);
    for (int i = int(r.size()) - 1; i >= dg; --i) {
      i64 coef = mod_pos(r[i], p);
      if (!coef) continue;
      q[i - dg] = coef;
      for (int j = 0; j <= dg; ++j)
        r[i - dg + j] = mod_pos(r[i - dg + j] - mulmod(coef, g[j], p), p);
    }
    for (int i = 0; i < dg; ++i)
      if (mod_pos(r[i], p) != 0) return false;
    return true;
  };
  // enumerate monic irreducibles by degree
  std::function<void(int)> strip = [&](int d) {
    if (int(c.size()) - 1 < d) return;
    i64 count = ipow(p, d);
    for (i64 code = 0; code < count; ++code) {
      std::vector<i64> g(d + 1);
      i64 t = code;
      for (int i = 0; i < d; ++i) {
        g[i] = t % p;
        t /= p;
      }
      g[d] = 1;
      // irreducibility of g: no factor among already-emitted smaller degrees
      bool irred = true;
      for (int dd = 1; dd <= d / 2 && irred; ++dd) {
        i64 cnt2 = ipow(p, dd);
        for (i64 cc = 0; cc < cnt2 && irred; ++cc) {
          std::vector<i64> h(dd + 1);
          i64 tt = cc;
          for (int i = 0; i < dd; ++i) {
            h[i] = tt % p;
            tt /= p;
          }
          h[dd] = 1;
          std::vector<i64> q;
          if (divide(g, h, q)) irred = false;
        }
      }
      if (!irred) continue;
      int mult = 0;
      std::vector<i64> q;
      while (int(c.size()) - 1 >= d && divide(c, g, q)) {
        c = q;
        ++mult;
      }
      if (mult) out.push_back({g, mult});
      if (int(c.size()) - 1 < d) return;
    }
  };
  for (int d = 1; int(c.size()) - 1 > 0; ++d) {
    if (d > int(c.size()) - 1) break;
    strip(d);
  }
  return out;
}

}  // namespace detail

struct irreducibility_report {
  cert verdict = cert::indeterminate;
  ef_pair ef;               // meaningful when verdict == yes
  int scaling_exponent = 0; // t from the x -> x / p^t normalization
  std::string note;
};

// Certified irreducibility over Q_p with e/f extraction: Newton polygon
// splitting, Ore residual-polynomial criterion, and the
// shift-and-rescale refinement for repeated linear residual factors.
inline irreducibility_report analyze_poly(const ppoly& P_in, int depth = 0) {
  irreducibility_report rep;
  i64 p = P_in.F->p();
  int n = P_in.deg();
  if (n < 1) throw error(errc::domain, "analyze_poly: constant polynomial");
  if (!P_in.monic()) throw error(errc::domain, "analyze_poly: not monic");
  if (depth > P_in.F->precision()) {
    rep.verdict = cert::indeterminate;
    rep.note = "PrecisionInsufficient: refinement depth exceeded precision";
    return rep;
  }
  ppoly P = P_in;
  // normalize to integral coefficients by x -> x / p^t
  int t = 0;
  for (int i = 0; i < n; ++i) {
    if (P.c[i].is_zero()) continue;
    int v = P.c[i].val(p);
    if (v < 0) {
      int need = (-v + (n - i) - 1) / (n - i);
      t = std::max(t, need);
    }
  }
  if (t > 0) {
    for (int i = 0; i <= n; ++i) {
      i64 scale = ipow(p, (n - i) * t);
      P.c[i] = P.c[i] * rat(scale);
    }
    rep.scaling_exponent = t;
  }
  if (!P.c[0].is_zero() && P.c[0].val(p) == 0 && n == 1) {
    rep.verdict = cert::yes;
    rep.ef = {1, 1};
    return rep;
  }
  if (n == 1) {
    rep.verdict = cert::yes;
    rep.ef = {1, 1};
    return rep;
  }
  if (P.c[0].is_zero()) {
    rep.verdict = cert::no;  // x divides
    rep.note = "zero constant term";
    return rep;
  }
  auto np = newton_polygon(P);
  if (np.segments.size() > 1) {
    rep.verdict = cert::no;
    rep.note = "polygon has several slopes";
    return rep;
  }
  rat slope = np.segments[0].slope;
  i64 e = slope.d;
  if (e == n) {
    rep.verdict = cert::yes;
    rep.ef = {int(e), 1};
    return rep;
  }
  if (e > 1) {
    // Ore residual polynomial along the single edge
    int m = int(n / e);
    std::vector<i64> R(m + 1, 0);
    for (int j = 0; j <= m; ++j) {
      int i = int(j * e);
      rat expect = slope * rat(n - i);  // valuation on the edge at abscissa i
      if (P.c[i].is_zero()) continue;
      int v = P.c[i].val(p);
      if (rat(v) == expect) {
        // residue of a_i / p^v
        rat u = P.c[i] / rat(ipow(p, v));
        R[j] = mulmod(mod_pos(u.n, p), invmod(mod_pos(u.d, p), p), p);
      }
    }
    auto fac = detail::factor_fp(R, p);
    if (fac.size() == 1 && fac[0].second == 1) {
      rep.verdict = cert::yes;
      rep.ef = {int(e), int(fac[0].first.size()) - 1};
      return rep;
    }
    if (fac.size() > 1) {
      rep.verdict = cert::no;
      rep.note = "residual polynomial splits";
      return rep;
    }
    rep.verdict = cert::indeterminate;
    rep.note = "UnsupportedShape: repeated residual factor at fractional slope";
    return rep;
  }
  // integral slope s: substitute x = p^s y, then analyze the residue
  i64 s = slope.n;  // slope = s/1, s >= 0
  ppoly Q = P;
  if (s > 0) {
    for (int i = 0; i <= n; ++i) {
      // coefficient of y^i is a_i p^{i s} / p^{n s}
      Q.c[i] = P.c[i] * rat(ipow(p, int(i * s))) / rat(ipow(p, int(n * s)));
    }
  }
  std::vector<i64> R(n + 1);
  for (int i = 0; i <= n; ++i) {
    if (Q.c[i].is_zero()) {
      R[i] = 0;
      continue;
    }
    if (Q.c[i].val(p) > 0) {
      R[i] = 0;
      continue;
    }
    R[i] = mulmod(mod_pos(Q.c[i].n, p), invmod(mod_pos(Q.c[i].d, p), p), p);
  }
  auto fac = detail::factor_fp(R, p);
  if (fac.size() > 1) {
    rep.verdict = cert::no;
    rep.note = "residue factors into coprime parts";
    return rep;
  }
  const auto& g = fac[0].first;
  int dg = int(g.size()) - 1;
  int mult = fac[0].second;
  if (mult == 1) {
    // residue irreducible of full degree: unramified
    rep.verdict = cert::yes;
    rep.ef = {1, n};
    return rep;
  }
  if (dg == 1) {
    // repeated linear residual factor: shift y -> z + c and recurse
    i64 croot = mod_pos(-g[0], p);
    ppoly S;
    S.F = Q.F;
    S.c.assign(n + 1, rat(0));
    // S(z) = Q(z + croot)
    for (int i = 0; i <= n; ++i) {
      // expand c_i (z + croot)^i
      i64 binom = 1;
      rat cpow(1);
      for (int j = 0; j <= i; ++j) {
        // coefficient of z^{i-j}: C(i,j) croot^j
        S.c[i - j] = S.c[i - j] + Q.c[i] * rat(binom) * cpow;
        binom = binom * (i - j) / (j + 1);
        cpow = cpow * rat(croot);
      }
    }
    auto sub = analyze_poly(S, depth + 1);
    rep.verdict = sub.verdict;
    rep.ef = sub.ef;
    rep.note = sub.note;
    return rep;
  }
  rep.verdict = cert::indeterminate;
  rep.note = "UnsupportedShape: repeated residual factor of degree " +
             std::to_string(dg);
  return rep;
}

inline cert certified_irreducible(const ppoly& P) {
  return analyze_poly(P).verdict;
}

// Ramification index and residue degree of F[root of minpoly] / F.
inline ef_pair ef_invariants(const ppoly& minpoly) {
  auto rep = analyze_poly(minpoly);
  if (rep.verdict == cert::no) throw not_irreducible("ef_invariants");
  if (rep.verdict == cert::indeterminate) {
    if (rep.note.rfind("UnsupportedShape", 0) == 0)
      throw unsupported_shape(rep.note);
    throw precision_insufficient(rep.note);
  }
  return rep.ef;
}

inline ef_pair local_field::ef() const {
  if (ef_cache_) return *ef_cache_;
  if (ext_.empty()) {
    ef_cache_ = ef_pair{1, 1};
  } else {
    ppoly g;
    g.F = std::make_shared<local_field>(p_, k_);
    for (i64 c : ext_) g.c.push_back(rat(c));
    ef_cache_ = ef_invariants(g);
  }
  return *ef_cache_;
}

// Residue map o_E -> k_E for a field whose defining polynomial reduces to a
// power of a single irreducible over F_p.  Returns the element code in the
// given gfq model of k_E (which must have matching p and f).
inline i64 residue_image(const padic& x, const gfq& k) {
  auto v = x.valuation();
  if (!v.has_value())
    throw precision_insufficient("residue_image: valuation uncertified");
  if (*v < 0) throw negative_valuation("residue_image");
  const auto& F = *x.field();
  auto ef = F.ef();
  if (k.p() != F.p() || k.f() != ef.f)
    throw error(errc::domain, "residue_image: residue field mismatch");
  std::vector<i64> cbar = x.residue_coeffs();
  if (F.degree() == 1) return mod_pos(cbar[0], F.p());
  // reduce defining polynomial mod p; must be (irreducible h)^e
  std::vector<i64> gbar(F.defining_poly().size());
  for (size_t i = 0; i < gbar.size(); ++i)
    gbar[i] = mod_pos(F.defining_poly()[i], F.p());
  auto fac = detail::factor_fp(gbar, F.p());
  if (fac.size() != 1 || int(fac[0].first.size()) - 1 != ef.f)
    throw unsupported_shape("residue_image: residue of defining poly not a "
                            "power of one irreducible");
  const auto& h = fac[0].first;
  // find the smallest root of h in the gfq model, evaluate cbar there
  i64 root = -1;
  for (i64 cand = 0; cand < k.q(); ++cand) {
    i64 val = 0;
    for (int i = int(h.size()) - 1; i >= 0; --i)
      val = k.add(k.mul(val, cand), k.from_prime(h[i]));
    if (val == 0) {
      root = cand;
      break;
    }
  }
  if (root < 0) throw error(errc::domain, "residue_image: no root found");
  i64 out = 0;
  for (int i = int(cbar.size()) - 1; i >= 0; --i)
    out = k.add(k.mul(out, root), k.from_prime(cbar[i]));
  return out;
}

}  // namespace btchar
