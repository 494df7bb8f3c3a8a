#pragma once

#include "btchar/building.hpp"
#include "btchar/padic.hpp"

namespace btchar {

// Invariants of an elliptic regular element gamma of GL_n(Q_p): its
// characteristic polynomial generates a degree-n field extension E = F[gamma].
struct elliptic_info {
  std::vector<rat> charpoly;  // monic, ascending
  ef_pair ef;                 // invariants of E / F
  int v_E = 0;                // normalized valuation of gamma in E
  bool minimal = false;       // minimal over F in the Bushnell-Kutzko sense
};

namespace elliptic_detail {

// residual characteristic polynomial coefficients mod p; requires p-integral
// coefficients
inline std::vector<i64> residual_charpoly(const qmat& g, i64 p) {
  auto cp = g.charpoly();
  std::vector<i64> out;
  for (const rat& c : cp) {
    if (!c.is_zero() && c.val(p) < 0)
      throw negative_valuation("residual_charpoly: non-integral coefficient");
    if (c.is_zero()) {
      out.push_back(0);
      continue;
    }
    i64 num = mod_pos(c.n, p);
    out.push_back(mulmod(num, invmod(mod_pos(c.d, p), p), p));
  }
  return out;
}

inline qmat qpow(const qmat& g, i64 e) {
  qmat base = e >= 0 ? g : g.inverse();
  i64 k = e >= 0 ? e : -e;
  qmat r = qmat::identity(g.n);
  for (i64 t = 0; t < k; ++t) r = r * base;
  return r;
}

}  // namespace elliptic_detail

// Certified analysis of gamma: elliptic regularity, field invariants, and
// minimality.  Throws not_elliptic when the characteristic polynomial is
// certified reducible, precision_insufficient / unsupported_shape when the
// analysis cannot certify at the given precision.
inline elliptic_info analyze_elliptic(const qmat& gamma, i64 p,
                                      int precision = 12) {
  elliptic_info info;
  int n = gamma.n;
  info.charpoly = gamma.charpoly();
  if (n == 1) {
    info.ef = {1, 1};
    info.v_E = gamma(0, 0).val(p);
    if (info.v_E == infinity_vp) throw not_elliptic("zero element");
    info.minimal = true;
    return info;
  }
  ppoly P;
  P.F = std::make_shared<local_field>(p, precision);
  P.c = info.charpoly;
  auto rep = analyze_poly(P);
  if (rep.verdict == cert::no)
    throw not_elliptic("characteristic polynomial splits over Q_p");
  if (rep.verdict == cert::indeterminate) {
    if (rep.note.rfind("UnsupportedShape", 0) == 0)
      throw unsupported_shape(rep.note);
    throw precision_insufficient(rep.note);
  }
  info.ef = rep.ef;
  rat det = gamma.det();
  int v = det.val(p);  // = v_F(Norm(gamma))
  if ((i64(info.ef.e) * v) % n != 0)
    throw error(errc::domain, "analyze_elliptic: inconsistent valuation");
  info.v_E = int(i64(info.ef.e) * v / n);
  // minimality
  auto p_pow = [&](int k) {
    return k >= 0 ? rat(ipow(p, k)) : rat(1, ipow(p, -k));
  };
  if (info.ef.e == n) {
    // totally ramified: the residue condition is vacuous
    info.minimal = std::gcd(i64(info.v_E), i64(n)) == 1;
  } else if (info.ef.e == 1) {
    // unramified: gcd(v_E, 1) = 1 always; residue generation decides
    qmat delta = gamma.scaled(p_pow(-info.v_E));
    auto rc = elliptic_detail::residual_charpoly(delta, p);
    auto fac = detail::factor_fp(rc, p);
    info.minimal = (fac.size() == 1 && fac[0].second == 1 &&
                    int(fac[0].first.size()) - 1 == n);
  } else {
    throw unsupported_shape("analyze_elliptic: 1 < e < n");
  }
  return info;
}

// The hereditary order normalized by gamma, constructed from the field
// structure: the chain of o_E-lattices o_E e_1 > pi_E o_E e_1 > ... in the
// standard model E = F[gamma] acting on F^n.
inline lattice_chain gamma_order_chain(const qmat& gamma, i64 p,
                                       int precision = 12) {
  auto info = analyze_elliptic(gamma, p, precision);
  int n = gamma.n;
  int e = info.ef.e;
  if (!info.minimal)
    throw minimality_required("gamma_order_chain: gamma not minimal");
  // generator of o_E as o_F-algebra
  qmat gen(n);
  if (e == 1) {
    gen = gamma.scaled(info.v_E >= 0 ? rat(1, ipow(p, info.v_E))
                                     : rat(ipow(p, -info.v_E)));
  } else {
    // pi_E = gamma^a p^b with a v_E + b e = 1
    i64 a, b;
    i64 g = ext_gcd(info.v_E, e, a, b);
    if (g != 1)
      throw minimality_required("gamma_order_chain: gcd(v_E, e) != 1");
    qmat ga = elliptic_detail::qpow(gamma, a);
    gen = ga.scaled(b >= 0 ? rat(ipow(p, int(b))) : rat(1, ipow(p, int(-b))));
  }
  // L_0 = o_F[gen] e_1 = span(e_1, gen e_1, ..., gen^{n-1} e_1)
  std::vector<std::vector<rat>> cols;
  std::vector<rat> v(n, rat(0));
  v[0] = rat(1);
  for (int t = 0; t < n; ++t) {
    cols.push_back(v);
    std::vector<rat> nv(n, rat(0));
    for (int i = 0; i < n; ++i) {
      rat s(0);
      for (int j = 0; j < n; ++j) s = s + gen(i, j) * v[j];
      nv[i] = s;
    }
    v = nv;
  }
  i64 D = 1;
  for (auto& col : cols)
    for (auto& x : col) D = std::lcm(D, x.d);
  mat M(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) M(i, j) = (cols[j][i] * rat(D)).n;
  lattice L0 = lattice::from_columns(p, M, vp(D, p));
  std::vector<lattice> members{L0};
  if (e > 1) {
    lattice cur = L0;
    for (int i = 1; i < e; ++i) {
      cur = cur.apply(gen);  // gen is the uniformizer pi_E here
      members.push_back(cur);
    }
  }
  lattice_chain C = lattice_chain::from_lattices(members);
  // gamma must normalize the constructed order
  hereditary_order A(C);
  if (!A.normalizer_shift(gamma).has_value())
    throw oracle_disagreement("gamma does not normalize its own chain");
  return C;
}

// All simplices of the patch whose vertex-class set is stabilized by g,
// together with the fixed vertices (as singleton lists).  This is the
// brute-force authority for the constructive route above.
inline std::vector<std::vector<int>> stabilized_simplices(
    const building_patch& P, const qmat& g, bool include_vertices = true) {
  std::vector<std::vector<int>> out;
  // image class of every vertex (patch_too_small if it leaves the ball:
  // callers should use interior vertices only; here we mark unknown as -1)
  std::vector<int> img(P.verts.size(), -1);
  for (std::size_t v = 0; v < P.verts.size(); ++v) {
    lattice L = P.verts[v].apply(g);
    auto key = L.homothety_key();
    auto it = P.index.find(key);
    if (it != P.index.end()) img[v] = it->second;
  }
  if (include_vertices)
    for (std::size_t v = 0; v < P.verts.size(); ++v)
      if (img[v] == int(v)) out.push_back({int(v)});
  for (const auto& s : P.simplices) {
    bool ok = true;
    std::vector<int> mapped;
    for (int v : s) {
      if (img[v] < 0) {
        ok = false;
        break;
      }
      mapped.push_back(img[v]);
    }
    if (!ok) continue;
    std::sort(mapped.begin(), mapped.end());
    std::vector<int> ss = s;
    std::sort(ss.begin(), ss.end());
    if (mapped == ss) out.push_back(ss);
  }
  return out;
}

// Image of a geometric point under g (affine on simplices: weights carried
// to image vertices).
inline geom_point apply_point(const building_patch& P, const qmat& g,
                              const geom_point& x) {
  geom_point y;
  for (std::size_t i = 0; i < x.verts.size(); ++i) {
    lattice L = P.verts[x.verts[i]].apply(g);
    y.verts.push_back(P.vertex_id(L.homothety_rep()));
    y.w.push_back(x.w[i]);
  }
  y.normalize();
  return y;
}

// The canonical point j(x_E) attached to gamma: isobarycenter of the simplex
// carried by the gamma-normalized chain.  (For N = 2: vertex if E/F is
// unramified, edge midpoint if ramified.)
inline geom_point embed_gamma_point(const building_patch& P, const qmat& gamma,
                                    int precision = 12) {
  auto C = gamma_order_chain(gamma, P.p, precision);
  return isobarycenter(simplex_of_chain(P, C));
}

}  // namespace btchar
