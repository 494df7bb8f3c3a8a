#pragma once

#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "btchar/elliptic.hpp"
#include "btchar/finitegl.hpp"

namespace btchar {

// ---------------------------------------------------------------------------
// Level-zero discrete-series specification for GL(2, Q_p).
//
//   e = 2: twisted Steinberg attached to a character rho_a of F_q^* (q = p).
//          Vertex datum = generalized Steinberg St(rho_a) of GL(2, q), dim q;
//          edge datum = the line rho_a (x) rho_a of the Iwahori torus
//          quotient.  The chain-order uniformizer Pi acts on the line by
//          zeta_m^{xi_pow} ("monomial" extended action); Pi^2 = p forces
//          2 * xi_pow == twist_pow (mod m).
//   e = 1: depth-zero supercuspidal attached to a cuspidal representation of
//          GL(2, q) (selected among the cuspidal table rows), dim q - 1.
//          Vertices carry the cuspidal datum, higher simplices carry 0.
//
// twist_pow encodes the unramified twist: the central character sends p to
// zeta_m^{twist_pow} (m = exponent of GL(2, q)); on units it is determined
// by the finite datum.
struct level_zero_spec {
  i64 p = 2;
  int e = 2;
  i64 rho = 0;       // torus character index (e = 2)
  int cusp_row = 0;  // index into cuspidal_rows(table) (e = 1)
  i64 xi_pow = 0;    // action of Pi on the edge line (e = 2)
  i64 twist_pow = 0; // central character at p
};

// Exact character value with provenance.
struct character_value {
  cyc_ring::val value;
  i64 m = 0;                 // values live in Z[zeta_m]
  std::string route;         // "simple" | "fixed_sum" | "orbital" | "oracle"
  int radius = -1;           // patch radius used (-1: no patch involved)
  bool certified = true;     // truncation certified complete
  bool gate_passed = true;   // Theorem 6.3 divisibility gate
  std::string extension = "monomial";
};

// ---------------------------------------------------------------------------
// Context: finite data shared by every character evaluation for one spec.

class lz_context {
 public:
  level_zero_spec spec;
  std::shared_ptr<fgl_table> T;  // table of GL(2, q), q = p
  int vertex_row = -1;           // table row of the vertex datum

  explicit lz_context(level_zero_spec s,
                      std::shared_ptr<fgl_table> table = nullptr)
      : spec(s) {
    if (!is_prime(spec.p)) throw schema_error("spec: p must be prime");
    if (spec.e != 1 && spec.e != 2) throw schema_error("spec: e must be 1 or 2");
    if (table) {
      if (table->G->n() != 2 || table->G->q() != spec.p)
        throw schema_error("spec: table is not GL(2, p)");
      T = std::move(table);
    } else {
      T = std::make_shared<fgl_table>(
          character_table(std::make_shared<fgl_group>(2, spec.p, 1)));
    }
    i64 mm = T->ring->m();
    spec.rho = mod_pos(spec.rho, spec.p - 1);
    spec.xi_pow = mod_pos(spec.xi_pow, mm);
    spec.twist_pow = mod_pos(spec.twist_pow, mm);
    if (spec.e == 2) {
      if (mod_pos(2 * spec.xi_pow - spec.twist_pow, mm) != 0)
        throw extended_action_needed(
            "Pi^2 = p requires 2 * xi_pow == twist_pow (mod m)");
      vertex_row = generalized_steinberg(*T, spec.rho).irr_index;
    } else {
      auto rows = cuspidal_rows(*T);
      if (spec.cusp_row < 0 || spec.cusp_row >= int(rows.size()))
        throw schema_error("spec: cusp_row out of range");
      vertex_row = rows[spec.cusp_row];
    }
  }

  const cyc_ring& ring() const { return *T->ring; }
  i64 m() const { return T->ring->m(); }
  i64 q() const { return spec.p; }
  i64 vertex_dim() const { return T->degrees[vertex_row]; }
  i64 edge_dim() const { return spec.e == 2 ? 1 : 0; }

  cyc_ring::val zeta_pow(i64 k) const { return ring().zeta(mod_pos(k, m())); }
  // central character at p^t
  cyc_ring::val central_twist(i64 t) const {
    return zeta_pow(spec.twist_pow * t);
  }
  // extended action of Pi^j on the edge line
  cyc_ring::val xi(i64 j) const { return zeta_pow(spec.xi_pow * j); }

  // central character at a unit z (via the finite datum): the unique root of
  // unity omega with chi(zI) = deg * omega.
  cyc_ring::val central_char_unit(i64 z) const {
    const fgl_group& G = *T->G;
    fgl_group::elem zi = {mod_pos(z, q()), 0, 0, mod_pos(z, q())};
    auto chi = T->chars[vertex_row][G.class_of_elem(zi)];
    const cyc_ring& R = ring();
    for (i64 s = 0; s < m(); ++s)
      if (chi == R.scal(R.zeta(s), vertex_dim())) return R.zeta(s);
    throw oracle_disagreement("central value is not a root of unity multiple");
  }
};

namespace cf_detail {

inline rat p_rat(i64 p, i64 k) {
  return k >= 0 ? rat(ipow(p, k)) : rat(1, ipow(p, -k));
}

// residue in GL(2, q) of an element u with u L = L (class well defined up to
// conjugacy, which is all the character evaluation needs)
inline int residue_class(const lz_context& ctx, const lattice& L,
                         const qmat& u) {
  auto C = lattice_chain::from_lattices({L});
  hereditary_order A(C);
  auto img = parahoric_quotient(A, u);
  const mat& b = img.blocks[0];
  fgl_group::elem el = {b(0, 0), b(0, 1), b(1, 0), b(1, 1)};
  return ctx.T->G->class_of_elem(el);
}

}  // namespace cf_detail

// Trace of the extended vertex datum at gamma, on a vertex whose lattice
// class gamma fixes: gamma = p^t u with u stabilizing L exactly.
inline cyc_ring::val vertex_trace(const lz_context& ctx, const lattice& L,
                                  const qmat& gamma) {
  int v = gamma.det().val(ctx.spec.p);
  if (mod_pos(v, 2) != 0)
    throw error(errc::domain, "vertex_trace: odd determinant valuation");
  i64 t = v / 2;
  qmat u = gamma.scaled(cf_detail::p_rat(ctx.spec.p, -t));
  int cls = cf_detail::residue_class(ctx, L, u);
  return ctx.ring().mul(ctx.central_twist(t), ctx.T->chars[ctx.vertex_row][cls]);
}

// Uniformizer of a period-2 chain: Pi with Pi L_0 = L_1 and Pi^2 = p exactly.
inline qmat edge_uniformizer(const lattice_chain& C) {
  if (C.period() != 2)
    throw malformed_chain("edge_uniformizer: period-2 chain required");
  i64 p = C.p();
  auto ab = adapted_basis(C.at(0), C.at(1));
  int ix;  // column with exponent 1
  if (ab.exp[0] == 1 && ab.exp[1] == 0)
    ix = 0;
  else if (ab.exp[0] == 0 && ab.exp[1] == 1)
    ix = 1;
  else
    throw malformed_chain("edge_uniformizer: quotient is not a line");
  qmat U(2);
  for (int i = 0; i < 2; ++i) {
    U(i, 0) = ab.U(i, ix);
    U(i, 1) = ab.U(i, 1 - ix);
  }
  qmat S(2);
  S(0, 1) = rat(p);
  S(1, 0) = rat(1);
  qmat Pi = U * S * U.inverse();
  if (!(Pi * Pi == qmat::identity(2).scaled(rat(p))))
    throw oracle_disagreement("edge_uniformizer: Pi^2 != p");
  hereditary_order A(C);
  auto s = A.normalizer_shift(Pi);
  if (!s || *s != 1)
    throw oracle_disagreement("edge_uniformizer: Pi does not shift by one");
  return Pi;
}

// Trace of the extended edge datum at gamma normalizing the chain order:
// gamma = Pi^j u, value = xi^j * rho(t_1 t_2).  Returns (j, trace).
inline std::pair<int, cyc_ring::val> edge_trace(const lz_context& ctx,
                                                const lattice_chain& C,
                                                const qmat& gamma) {
  if (ctx.spec.e != 2)
    throw error(errc::domain, "edge_trace: spec carries no edge datum");
  hereditary_order A(C);
  auto s = A.normalizer_shift(gamma);
  if (!s) throw error(errc::domain, "edge_trace: gamma does not normalize");
  int j = *s;
  qmat Pi = edge_uniformizer(C);
  qmat u = elliptic_detail::qpow(Pi, -j) * gamma;
  if (!A.in_U(u))
    throw oracle_disagreement("edge_trace: unit part not in U(A)");
  auto img = parahoric_quotient(A, u);
  const gfq& F = ctx.T->G->field();
  i64 tprod = F.mul(img.blocks[0](0, 0), img.blocks[1](0, 0));
  auto val = ctx.ring().mul(ctx.xi(j), mult_char(*ctx.T, ctx.spec.rho, tprod));
  return {j, val};
}

// ---------------------------------------------------------------------------
// Fixed-cell bookkeeping on a patch.

struct fixed_cell {
  std::vector<int> verts;  // patch vertex ids
  int shift = 0;           // chain shift of gamma (edges only)
  int depth = 0;           // max BFS depth of the vertices
};

struct fixed_cell_set {
  std::vector<fixed_cell> cells;
  int max_depth = 0;
  bool certified = false;  // no cell touches the two outermost shells
};

inline fixed_cell_set collect_fixed_cells(const building_patch& P,
                                          const qmat& gamma) {
  fixed_cell_set out;
  auto cells = stabilized_simplices(P, gamma, true);
  for (auto& c : cells) {
    fixed_cell fc;
    fc.verts = c;
    for (int v : c) fc.depth = std::max(fc.depth, P.depth[v]);
    if (c.size() == 2) {
      hereditary_order A(chain_of_simplex(P, c));
      auto s = A.normalizer_shift(gamma);
      if (!s)
        throw oracle_disagreement("stabilized edge without normalizer shift");
      fc.shift = *s;
    }
    out.max_depth = std::max(out.max_depth, fc.depth);
    out.cells.push_back(std::move(fc));
  }
  // an elliptic regular element always fixes a point of the building, so an
  // empty cell list means the fixed set lies beyond the patch
  out.certified = !out.cells.empty() && out.max_depth <= P.radius - 2;
  return out;
}

// ---------------------------------------------------------------------------
// Character routes.

// Theorem 6.2 route: alternating sum over the cells of the fixed-point
// complex.  A vertex or a pointwise-fixed edge of X contributes with sign
// (+, -) by its dimension; an edge whose endpoints gamma swaps contributes
// its midpoint, a 0-cell of the fixed complex, with sign + and the extended
// (odd-shift) trace.
inline character_value char_fixed_sum(const lz_context& ctx, const qmat& gamma,
                                      const building_patch& P,
                                      int precision = 12) {
  if (P.p != ctx.spec.p || P.n != 2)
    throw schema_error("char_fixed_sum: patch does not match the spec");
  analyze_elliptic(gamma, ctx.spec.p, precision);  // enforce elliptic regular
  auto fix = collect_fixed_cells(P, gamma);
  if (!fix.certified)
    throw patch_too_small("fixed cells touch the patch boundary");
  const cyc_ring& R = ctx.ring();
  auto acc = R.zero();
  for (const auto& fc : fix.cells) {
    if (fc.verts.size() == 1) {
      acc = R.add(acc, vertex_trace(ctx, P.verts[fc.verts[0]], gamma));
    } else {
      if (ctx.spec.e == 1) continue;  // zero coefficient on edges
      auto [j, tr] = edge_trace(ctx, chain_of_simplex(P, fc.verts), gamma);
      acc = mod_pos(j, 2) == 1 ? R.add(acc, tr) : R.sub(acc, tr);
    }
  }
  character_value cv;
  cv.value = acc;
  cv.m = ctx.m();
  cv.route = "fixed_sum";
  cv.radius = P.radius;
  cv.certified = true;
  return cv;
}

// Theorem 6.3 route: divisibility gate, then a single trace at the unique
// cell sigma_gamma carried by the gamma-normalized order.  Requires gamma
// minimal; no patch needed.
inline character_value char_simple(const lz_context& ctx, const qmat& gamma,
                                   int precision = 12) {
  auto info = analyze_elliptic(gamma, ctx.spec.p, precision);
  if (!info.minimal)
    throw minimality_required("char_simple: gamma is not minimal");
  int fL = ctx.spec.e == 1 ? 2 : 1;
  character_value cv;
  cv.m = ctx.m();
  cv.route = "simple";
  if (info.ef.f % fL != 0) {
    cv.value = ctx.ring().zero();
    cv.gate_passed = false;
    return cv;
  }
  auto C = gamma_order_chain(gamma, ctx.spec.p, precision);
  if (C.period() == 1)
    cv.value = vertex_trace(ctx, C.at(0), gamma);
  else
    cv.value = edge_trace(ctx, C, gamma).second;
  return cv;
}

// ---------------------------------------------------------------------------
// Independent supercuspidal oracle (e = 1): identify the regular character
// theta of F_{q^2}^* behind the chosen cuspidal row, then re-derive every
// class value from the closed formula
//   central z          -> (q-1) theta(z)
//   z * unipotent      -> -theta(z)
//   split regular      -> 0
//   elliptic, eigenv x -> -theta(x) - theta(x^q)
// and sum over the fixed vertices with the unramified twist.

namespace cf_detail {

struct green_evaluator {
  const lz_context* ctx;
  gfq E;  // F_{q^2}
  i64 k;  // theta = (dlog ->) zeta_{q^2-1}^{k dlog}

  green_evaluator(const lz_context& c, i64 kk)
      : ctx(&c), E(c.spec.p, 2), k(kk) {}

  cyc_ring::val theta(i64 x) const {
    i64 mm = ctx->m();
    i64 n = E.q() - 1;
    if (mm % n != 0)
      throw error(errc::domain, "green: q^2 - 1 does not divide the exponent");
    return ctx->ring().zeta(mod_pos((mm / n) * k * E.dlog(x), mm));
  }

  cyc_ring::val value_at_class(int cls) const {
    const fgl_group& G = *ctx->T->G;
    const cyc_ring& R = ctx->ring();
    auto g = G.at(G.class_rep(cls));
    const gfq& F = G.field();
    i64 tr = F.add(g[0], g[3]);
    i64 det = F.sub(F.mul(g[0], g[3]), F.mul(g[1], g[2]));
    if (g[1] == 0 && g[2] == 0 && g[0] == g[3])
      return R.scal(theta(E.from_prime(g[0])), ctx->q() - 1);  // central
    // eigenvalues in E: roots of x^2 - tr x + det
    i64 trE = E.from_prime(tr), detE = E.from_prime(det);
    std::vector<i64> roots;
    for (i64 x = 1; x < E.q(); ++x) {
      i64 v = E.add(E.sub(E.mul(x, x), E.mul(trE, x)), detE);
      if (v == 0) roots.push_back(x);
    }
    if (roots.size() == 1)  // repeated eigenvalue, nonscalar: z * unipotent
      return R.neg(theta(roots[0]));
    if (roots.size() != 2)
      throw oracle_disagreement("green: eigenvalue count");
    bool in_fq0 = E.frob(roots[0]) == roots[0];
    bool in_fq1 = E.frob(roots[1]) == roots[1];
    if (in_fq0 && in_fq1) return R.zero();  // split regular semisimple
    if (in_fq0 || in_fq1)
      throw oracle_disagreement("green: eigenvalues not Galois stable");
    return R.neg(R.add(theta(roots[0]), theta(E.frob(roots[0]))));
  }
};

// find theta matching the cuspidal table row; unique up to k <-> kq
inline i64 identify_theta(const lz_context& ctx) {
  const fgl_group& G = *ctx.T->G;
  i64 q = ctx.q();
  i64 n = q * q - 1;
  std::vector<i64> matches;
  for (i64 k = 1; k < n; ++k) {
    if (mod_pos(k * q, n) == k) continue;  // theta^q == theta: not regular
    green_evaluator ev(ctx, k);
    bool ok = true;
    for (int c = 0; c < G.num_classes() && ok; ++c)
      if (!(ev.value_at_class(c) == ctx.T->chars[ctx.vertex_row][c]))
        ok = false;
    if (ok) matches.push_back(k);
  }
  if (matches.size() != 2 ||
      mod_pos(matches[0] * q, n) != matches[1])
    throw oracle_disagreement("green: theta not identified uniquely");
  return matches[0];
}

}  // namespace cf_detail

inline character_value char_supercuspidal_oracle(const lz_context& ctx,
                                                 const qmat& gamma,
                                                 const building_patch& P,
                                                 int precision = 12) {
  if (ctx.spec.e != 1)
    throw error(errc::domain, "supercuspidal oracle: e = 1 specs only");
  if (P.p != ctx.spec.p || P.n != 2)
    throw schema_error("supercuspidal oracle: patch does not match the spec");
  analyze_elliptic(gamma, ctx.spec.p, precision);  // throws not_elliptic
  auto fix = collect_fixed_cells(P, gamma);
  if (!fix.certified)
    throw patch_too_small("fixed vertices touch the patch boundary");
  i64 k = cf_detail::identify_theta(ctx);
  cf_detail::green_evaluator ev(ctx, k);
  const cyc_ring& R = ctx.ring();
  int v = gamma.det().val(ctx.spec.p);
  auto acc = R.zero();
  for (const auto& fc : fix.cells) {
    if (fc.verts.size() != 1) continue;
    if (mod_pos(v, 2) != 0)
      throw oracle_disagreement("fixed vertex with odd determinant valuation");
    i64 t = v / 2;
    qmat u = gamma.scaled(cf_detail::p_rat(ctx.spec.p, -t));
    int cls = cf_detail::residue_class(ctx, P.verts[fc.verts[0]], u);
    acc = R.add(acc, R.mul(ctx.central_twist(t), ev.value_at_class(cls)));
  }
  character_value cv;
  cv.value = acc;
  cv.m = ctx.m();
  cv.route = "oracle";
  cv.radius = P.radius;
  return cv;
}

// ---------------------------------------------------------------------------
// Euler-Poincare function and the orbital route.

struct ep_term {
  int degree;              // simplex dimension
  std::string stabilizer;  // descriptor
  rat weight;              // mu_{G/Z}(G_sigma / Z)^{-1}, U(A_max)-image = 1
  i64 dim;                 // dim of the coefficient datum
};

struct ep_function_t {
  level_zero_spec spec;
  std::vector<ep_term> terms;
};

inline ep_function_t ep_function(const lz_context& ctx) {
  ep_function_t ep;
  ep.spec = ctx.spec;
  i64 q = ctx.q();
  if (ctx.spec.e == 2) {
    ep.terms.push_back({0, "F^* GL(2, Z_p)", rat(1), q});
    ep.terms.push_back({1, "<Pi> U(I) F^*", rat(q + 1, 2), 1});
  } else {
    ep.terms.push_back({0, "F^* GL(2, Z_p)", rat(1), q - 1});
  }
  return ep;
}

struct orbital_report {
  std::vector<int> radii;
  std::vector<cyc_ring::val> partials;
  bool stabilized = false;
  cyc_ring::val value;
  int settled_radius = -1;
};

// Theorem 6.1 route: the orbital integral of f_EP against the conjugation
// orbit, unfolded over the cells of the patch.  The normalized volumes of
// the term weights cancel exactly against the coset count of each cell
// orbit, leaving the signed sum (-1)^q eps_sigma(gamma) Tr(gamma, lambda)
// over all setwise-stabilized cells; partial sums by growing radius.
inline orbital_report orbital_integral_stabilization(
    const lz_context& ctx, const ep_function_t& ep, const qmat& gamma,
    const building_patch& P, const std::vector<int>& radii,
    int precision = 12) {
  if (ep.terms.empty() || ep.terms[0].degree != 0)
    throw schema_error("orbital: malformed EP term list");
  if (radii.empty()) throw schema_error("orbital: empty radius schedule");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1])
      throw schema_error("orbital: radii must increase");
  if (radii.back() > P.radius)
    throw patch_too_small("orbital: radius schedule exceeds the patch");
  analyze_elliptic(gamma, ctx.spec.p, precision);
  auto fix = collect_fixed_cells(P, gamma);
  const cyc_ring& R = ctx.ring();
  // signed contribution and depth per cell
  std::vector<std::pair<int, cyc_ring::val>> contrib;
  for (const auto& fc : fix.cells) {
    if (fc.verts.size() == 1) {
      contrib.push_back(
          {fc.depth, vertex_trace(ctx, P.verts[fc.verts[0]], gamma)});
    } else {
      if (ctx.spec.e == 1) continue;
      auto [j, tr] = edge_trace(ctx, chain_of_simplex(P, fc.verts), gamma);
      // (-1)^1 * eps: eps = -1 when gamma swaps the endpoints (odd shift)
      contrib.push_back({fc.depth, mod_pos(j, 2) == 1 ? tr : R.neg(tr)});
    }
  }
  orbital_report rep;
  rep.radii = radii;
  for (int Rad : radii) {
    auto acc = R.zero();
    for (auto& [d, v] : contrib)
      if (d <= Rad) acc = R.add(acc, v);
    rep.partials.push_back(acc);
  }
  rep.value = rep.partials.back();
  std::size_t nr = rep.partials.size();
  bool tail_equal = nr >= 2 && rep.partials[nr - 1] == rep.partials[nr - 2];
  bool clearance = fix.certified && fix.max_depth <= radii.back() - 2;
  rep.stabilized = tail_equal && clearance;
  if (rep.stabilized) {
    for (std::size_t i = 0; i < nr; ++i)
      if (rep.partials[i] == rep.value &&
          (i == 0 || !(rep.partials[i - 1] == rep.value))) {
        rep.settled_radius = radii[i];
      }
  }
  return rep;
}

// strict wrapper: a CharacterValue or NotStabilized with the tail profile
inline character_value char_orbital(const lz_context& ctx,
                                    const ep_function_t& ep, const qmat& gamma,
                                    const building_patch& P,
                                    const std::vector<int>& radii,
                                    int precision = 12) {
  auto rep = orbital_integral_stabilization(ctx, ep, gamma, P, radii, precision);
  if (!rep.stabilized) {
    std::string tail = "orbital tail:";
    for (const auto& v : rep.partials) tail += " " + ctx.ring().str(v);
    throw not_stabilized(tail);
  }
  character_value cv;
  cv.value = rep.value;
  cv.m = ctx.m();
  cv.route = "orbital";
  cv.radius = radii.back();
  return cv;
}

// ---------------------------------------------------------------------------
// Coefficient system and oriented chain complex on a patch (N = 2).
//
// The det-twist rho_a o det is stripped from the model: twisting every datum
// by the same character of the residue group changes no dimension and no
// rank, and the complex below is used only for dimension and exactness
// checks.  Vertex datum model: Steinberg = zero-sum functions on the q + 1
// lines of L_v / p L_v; edge datum at an endpoint v with direction x: the
// line spanned by  q * delta_x - 1  (the Borel-eigenvector of St).

struct coeff_system {
  level_zero_spec spec;
  const building_patch* P = nullptr;
  i64 vertex_dim = 0, edge_dim = 0;
  int vertex_row = -1;

  struct edge_data {
    int tail, head;        // tail has type 0, head type 1
    int dir_tail, dir_head;  // P^1 indices of the opposite endpoint
  };
  std::vector<edge_data> edges;
  std::vector<int> vtype;  // det_val of the homothety representative mod 2
};

namespace cf_detail {

// index of a line of L_v / p L_v in the subspace_reps(p, 2, 1) order, given
// an integral generating vector in the basis of L_v (nonzero mod p)
inline int line_index(i64 p, i64 c0, i64 c1) {
  c0 = mod_pos(c0, p);
  c1 = mod_pos(c1, p);
  if (c0 == 0 && c1 == 0)
    throw error(errc::domain, "line_index: zero vector");
  // normalize leading coefficient to 1
  i64 lead = c0 != 0 ? c0 : c1;
  i64 li = invmod(lead, p);
  c0 = mulmod(c0, li, p);
  c1 = mulmod(c1, li, p);
  // subspace_reps order: by the code c0 + p * c1, restricted to lead-1 reps
  int idx = 0;
  for (i64 code = 0; code < p * p; ++code) {
    i64 v0 = code % p, v1 = code / p;
    i64 l = v0 != 0 ? v0 : v1;
    if (l != 1) continue;
    if (v0 == c0 && v1 == c1) return idx;
    ++idx;
  }
  throw error(errc::domain, "line_index: not found");
}

// direction of vertex w as seen from adjacent vertex v
inline int direction_index(const building_patch& P, int v, int w) {
  const lattice& Lv = P.verts[v];
  lattice M = P.verts[w];
  bool placed = false;
  for (int k = -2 * P.n; k <= 2 * P.n && !placed; ++k) {
    lattice Mk = M.scaled_p(k);
    if (Lv.contains(Mk) && Mk.contains(Lv.scaled_p(1)) && Mk != Lv) {
      M = Mk;
      placed = true;
    }
  }
  if (!placed) throw malformed_chain("direction_index: not adjacent");
  qmat C = Lv.basis_q().inverse() * M.basis_q();
  // rank-1 reduction mod p: first column that is nonzero mod p
  i64 p = P.p;
  for (int j = 0; j < 2; ++j) {
    i64 c[2];
    bool ok = true, nonzero = false;
    for (int i = 0; i < 2; ++i) {
      rat r = C(i, j);
      if (!r.is_zero() && r.val(p) < 0) ok = false;
      i64 num = r.is_zero() ? 0 : mod_pos(r.n, p);
      i64 den = r.is_zero() ? 1 : invmod(mod_pos(r.d, p), p);
      c[i] = mulmod(num, den, p);
      if (c[i] != 0) nonzero = true;
    }
    if (!ok) throw error(errc::domain, "direction_index: non-integral");
    if (nonzero) return line_index(p, c[0], c[1]);
  }
  throw error(errc::domain, "direction_index: quotient not a line");
}

}  // namespace cf_detail

inline coeff_system build_coefficient_system(const lz_context& ctx,
                                             const building_patch& P) {
  if (P.n != 2 || P.p != ctx.spec.p)
    throw schema_error("build_coefficient_system: patch mismatch");
  coeff_system cs;
  cs.spec = ctx.spec;
  cs.P = &P;
  cs.vertex_dim = ctx.vertex_dim();
  cs.edge_dim = ctx.edge_dim();
  cs.vertex_row = ctx.vertex_row;
  // dimension consistency with the finite table
  if (ctx.spec.e == 2 && cs.vertex_dim != ctx.q())
    throw oracle_disagreement("vertex datum degree != q");
  if (ctx.spec.e == 1 && cs.vertex_dim != ctx.q() - 1)
    throw oracle_disagreement("vertex datum degree != q - 1");
  for (const lattice& L : P.verts)
    cs.vtype.push_back(mod_pos(L.homothety_rep().det_val(), 2));
  for (const auto& s : P.simplices) {
    if (s.size() != 2) continue;
    int a = s[0], b = s[1];
    coeff_system::edge_data e;
    if (cs.vtype[a] == 0 && cs.vtype[b] == 1) {
      e.tail = a;
      e.head = b;
    } else if (cs.vtype[a] == 1 && cs.vtype[b] == 0) {
      e.tail = b;
      e.head = a;
    } else {
      throw oracle_disagreement("edge between vertices of equal type");
    }
    e.dir_tail = cf_detail::direction_index(P, e.tail, e.head);
    e.dir_head = cf_detail::direction_index(P, e.head, e.tail);
    cs.edges.push_back(e);
  }
  return cs;
}

// Oriented chain complex of the coefficient system over F_ell (ell a fixed
// large prime; full column rank mod ell certifies injectivity of the
// integral boundary map in characteristic zero).
struct chain_complex_t {
  i64 ell = 1000003;
  int n_vert = 0, n_edge = 0;
  i64 dim0 = 0, dim1 = 0;  // coefficient-system dimensions per degree
  // boundary matrix in the ambient function model: rows indexed by
  // (vertex, P^1 point), one column per edge; the image lies in the
  // zero-sum subspaces
  dixon_detail::fmat boundary;
  bool d2_zero = true;  // no 2-simplices on the tree: vacuously exact
};

inline chain_complex_t chain_complex(const coeff_system& cs) {
  const building_patch& P = *cs.P;
  chain_complex_t cc;
  i64 p = P.p;
  int nlines = int(p) + 1;
  cc.n_vert = int(P.verts.size());
  cc.n_edge = int(cs.edges.size());
  cc.dim0 = cc.n_vert * cs.vertex_dim;
  cc.dim1 = cc.n_edge * cs.edge_dim;
  if (cs.edge_dim == 0) return cc;  // complex concentrated in degree 0
  int rows = cc.n_vert * nlines;
  cc.boundary.assign(rows, dixon_detail::vec(cc.n_edge, 0));
  for (int e = 0; e < cc.n_edge; ++e) {
    const auto& ed = cs.edges[e];
    auto add_block = [&](int v, int dir, i64 sign) {
      for (int x = 0; x < nlines; ++x) {
        i64 coef = (x == dir) ? p : 0;  // q * delta_dir - 1
        coef -= 1;
        cc.boundary[v * nlines + x][e] =
            mod_pos(cc.boundary[v * nlines + x][e] + sign * coef, cc.ell);
      }
    };
    add_block(ed.head, ed.dir_head, 1);
    add_block(ed.tail, ed.dir_tail, -1);
  }
  return cc;
}

// rank of a rectangular matrix over F_ell
inline int rank_mod(dixon_detail::fmat M, i64 ell) {
  if (M.empty()) return 0;
  auto piv = dixon_detail::rref(M, ell);
  return int(piv.size());
}

// H_1 of the truncated complex vanishes: the boundary map has full column
// rank (certified over characteristic zero by the mod-ell computation).
inline bool complex_h1_vanishes(const chain_complex_t& cc) {
  if (cc.n_edge == 0 || cc.dim1 == 0) return true;
  return rank_mod(cc.boundary, cc.ell) == cc.n_edge;
}

// ---------------------------------------------------------------------------
// Apartment isotypic check (Conjecture 2, desk form).  The lambda_max-
// isotypic component is realized as the Iwahori-invariants of the (det-twist
// stripped) complex; since every Iwahori generator acts by permuting the
// (vertex, line) pairs and the edges, invariant dimensions are orbit counts.

struct apartment_report {
  int radius = 0;
  i64 apartment_cells0 = 0, apartment_cells1 = 0;  // line: 2R+1, 2R
  i64 iso_dim0 = 0, iso_dim1 = 0;
  bool dims_match = false;
  bool h1_vanishes = false;
  bool boundary_contamination = false;  // radius too small for a verdict
};

namespace cf_detail {

// topological generators of the diagonal unit coefficients
inline std::vector<i64> unit_gens(i64 p) {
  if (p == 2) return {-1, 3, 5};
  // primitive root mod p^2 (odd p)
  for (i64 g = 2; g < p * p; ++g) {
    bool prim_p = true;
    i64 x = 1;
    for (i64 t = 1; t < p - 1; ++t) {
      x = mulmod(x, mod_pos(g, p), p);
      if (x == 1) {
        prim_p = false;
        break;
      }
    }
    if (!prim_p) continue;
    if (powmod(mod_pos(g, p * p), p - 1, p * p) != 1) return {g};
  }
  throw error(errc::domain, "unit_gens: no primitive root found");
}

inline std::vector<qmat> iwahori_generators(i64 p) {
  std::vector<qmat> gens;
  auto make = [&](rat a, rat b, rat c, rat d) {
    qmat g(2);
    g(0, 0) = a;
    g(0, 1) = b;
    g(1, 0) = c;
    g(1, 1) = d;
    return g;
  };
  gens.push_back(make(rat(1), rat(1), rat(0), rat(1)));
  gens.push_back(make(rat(1), rat(0), rat(p), rat(1)));
  for (i64 u : unit_gens(p)) {
    gens.push_back(make(rat(u), rat(0), rat(0), rat(1)));
    gens.push_back(make(rat(1), rat(0), rat(0), rat(u)));
  }
  return gens;
}

// orbit count of the group generated by a list of permutations
inline i64 orbit_count(const std::vector<std::vector<int>>& perms, int n) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& pm : perms)
    for (int i = 0; i < n; ++i) {
      int a = find(i), b = find(pm[i]);
      if (a != b) parent[a] = b;
    }
  i64 c = 0;
  for (int i = 0; i < n; ++i)
    if (find(i) == i) ++c;
  return c;
}

}  // namespace cf_detail

inline apartment_report apartment_isotypic_check(const lz_context& ctx,
                                                 const coeff_system& cs,
                                                 const building_patch& P) {
  apartment_report rep;
  rep.radius = P.radius;
  if (ctx.spec.e == 1) {
    // X_L is a point: complex concentrated in degree 0, apartment a point
    rep.apartment_cells0 = 1;
    rep.apartment_cells1 = 0;
    rep.iso_dim0 = 1;
    rep.iso_dim1 = 0;
    rep.dims_match = true;
    rep.h1_vanishes = true;
    return rep;
  }
  rep.boundary_contamination = P.radius < 4;
  rep.apartment_cells0 = 2 * P.radius + 1;
  rep.apartment_cells1 = 2 * P.radius;
  i64 p = P.p;
  int nlines = int(p) + 1;
  int nv = int(P.verts.size());
  int ne = int(cs.edges.size());
  // edge id lookup by unordered endpoint pair
  std::map<std::pair<int, int>, int> eid;
  for (int e = 0; e < ne; ++e) {
    auto& ed = cs.edges[e];
    eid[{std::min(ed.tail, ed.head), std::max(ed.tail, ed.head)}] = e;
  }
  auto gens = cf_detail::iwahori_generators(p);
  std::vector<std::vector<int>> vperms, pairperms, eperms;
  for (const qmat& g : gens) {
    std::vector<int> vp_(nv), pp(nv * nlines), epm(ne);
    for (int v = 0; v < nv; ++v) {
      lattice img = P.verts[v].apply(g);
      int w = P.vertex_id(img.homothety_rep());
      vp_[v] = w;
      if (cs.vtype[v] != cs.vtype[w])
        throw oracle_disagreement("Iwahori generator changes vertex type");
      // line permutation: x at v -> image line at w
      qmat M = P.verts[w].basis_q().inverse() * g * P.verts[v].basis_q();
      int idx = 0;
      for (i64 code = 0; code < p * p; ++code) {
        i64 x0 = code % p, x1 = code / p;
        i64 lead = x0 != 0 ? x0 : x1;
        if (lead != 1) continue;
        i64 c[2];
        for (int i = 0; i < 2; ++i) {
          rat r = M(i, 0) * rat(x0) + M(i, 1) * rat(x1);
          if (!r.is_zero() && r.val(p) < 0)
            throw error(errc::domain, "apartment: non-integral line image");
          i64 num = r.is_zero() ? 0 : mod_pos(r.n, p);
          i64 den = r.is_zero() ? 1 : invmod(mod_pos(r.d, p), p);
          c[i] = mulmod(num, den, p);
        }
        int yi = cf_detail::line_index(p, c[0], c[1]);
        pp[v * nlines + idx] = w * nlines + yi;
        ++idx;
      }
    }
    for (int e = 0; e < ne; ++e) {
      int a = vp_[cs.edges[e].tail], b = vp_[cs.edges[e].head];
      auto it = eid.find({std::min(a, b), std::max(a, b)});
      if (it == eid.end())
        throw oracle_disagreement("Iwahori generator leaves the edge set");
      epm[e] = it->second;
    }
    vperms.push_back(std::move(vp_));
    pairperms.push_back(std::move(pp));
    eperms.push_back(std::move(epm));
  }
  // invariants of the permutation modules are orbit counts; the Steinberg
  // block invariants are pairs-orbits minus the constant (vertex) orbits
  i64 vorb = cf_detail::orbit_count(vperms, nv);
  i64 porb = cf_detail::orbit_count(pairperms, nv * nlines);
  i64 eorb = cf_detail::orbit_count(eperms, ne);
  rep.iso_dim0 = porb - vorb;
  rep.iso_dim1 = eorb;
  rep.dims_match = rep.iso_dim0 == rep.apartment_cells0 &&
                   rep.iso_dim1 == rep.apartment_cells1;
  // boundary restricted to the invariant subspace: orbit-summed columns
  auto cc = chain_complex(cs);
  // orbit representatives of edges under the generated group
  std::vector<int> orbit_of(ne, -1);
  {
    std::vector<int> stack;
    int next = 0;
    for (int e = 0; e < ne; ++e) {
      if (orbit_of[e] >= 0) continue;
      orbit_of[e] = next;
      stack.push_back(e);
      while (!stack.empty()) {
        int cur = stack.back();
        stack.pop_back();
        for (const auto& pm : eperms)
          if (orbit_of[pm[cur]] < 0) {
            orbit_of[pm[cur]] = next;
            stack.push_back(pm[cur]);
          }
      }
      ++next;
    }
  }
  dixon_detail::fmat inv_cols(cc.boundary.size(),
                              dixon_detail::vec(std::size_t(eorb), 0));
  for (int e = 0; e < ne; ++e)
    for (std::size_t r = 0; r < cc.boundary.size(); ++r)
      inv_cols[r][orbit_of[e]] =
          mod_pos(inv_cols[r][orbit_of[e]] + cc.boundary[r][e], cc.ell);
  rep.h1_vanishes = rank_mod(inv_cols, cc.ell) == int(eorb);
  return rep;
}

}  // namespace btchar
