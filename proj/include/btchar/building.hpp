#pragma once

#include <map>
#include <vector>

#include "btchar/chain.hpp"

namespace btchar {

// Representatives of the d-dimensional subspaces of F_p^n, as integer lift
// matrices (n x d).  d = 1: vectors with first nonzero entry 1; d = n-1:
// kernels of such covectors.
inline std::vector<mat> subspace_reps(i64 p, int n, int d) {
  std::vector<mat> out;
  if (d == 1) {
    i64 total = ipow(p, n);
    for (i64 code = 0; code < total; ++code) {
      std::vector<i64> v(n);
      i64 t = code;
      for (int i = 0; i < n; ++i) {
        v[i] = t % p;
        t /= p;
      }
      int lead = -1;
      for (int i = 0; i < n; ++i)
        if (v[i] != 0) {
          lead = i;
          break;
        }
      if (lead < 0 || v[lead] != 1) continue;
      mat M(n, 1);
      for (int i = 0; i < n; ++i) M(i, 0) = v[i];
      out.push_back(M);
    }
    return out;
  }
  if (d == n - 1) {
    // kernel of the covector phi: basis from the pivot structure
    for (const mat& phi : subspace_reps(p, n, 1)) {
      int lead = 0;
      while (phi(lead, 0) == 0) ++lead;
      mat K(n, n - 1);
      int c = 0;
      for (int i = 0; i < n; ++i) {
        if (i == lead) continue;
        // e_i - phi_i * e_lead
        K(i, c) = 1;
        K(lead, c) = mod_pos(-phi(i, 0), p);
        ++c;
      }
      out.push_back(K);
    }
    return out;
  }
  throw budget_exceeded("subspace_reps: only lines and hyperplanes supported");
}

// Neighbours of a homothety class [L] in the building: classes [M] with
// p L < M < L, i.e. nonzero proper subspaces of L/pL.
inline std::vector<lattice> incident_classes(const lattice& L) {
  i64 p = L.p();
  int n = L.n();
  std::vector<lattice> out;
  std::vector<int> dims;
  for (int d = 1; d < n; ++d) dims.push_back(d);
  for (int d : dims) {
    for (const mat& S : subspace_reps(p, n, d)) {
      mat cols(n, d + n);
      // columns: B * lift(S) and p * B
      for (int j = 0; j < d; ++j)
        for (int i = 0; i < n; ++i) {
          i64 s = 0;
          for (int t = 0; t < n; ++t) s += L.basis()(i, t) * S(t, j);
          cols(i, j) = s;
        }
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) cols(i, d + j) = mul_i64(p, L.basis()(i, j));
      lattice M = lattice::from_columns(p, cols, L.denom());
      out.push_back(M.homothety_rep());
    }
  }
  return out;
}

// Finite patch of the building: ball of the given radius around the class of
// the standard lattice, with all simplices between its vertices.
struct building_patch {
  i64 p = 0;
  int n = 0;
  int radius = 0;
  std::vector<lattice> verts;  // homothety representatives
  std::vector<int> depth;      // BFS distance from the base vertex
  std::map<std::string, int> index;
  std::vector<std::vector<int>> adj;        // sorted neighbour ids
  std::vector<std::vector<int>> simplices;  // dim >= 1, sorted vertex ids

  int base() const { return 0; }
  int vertex_id(const lattice& L) const {
    auto it = index.find(L.homothety_key());
    if (it == index.end())
      throw patch_too_small("vertex not inside the enumerated patch");
    return it->second;
  }
  bool has_vertex(const lattice& L) const {
    return index.count(L.homothety_key()) > 0;
  }
  bool adjacent(int u, int v) const {
    return std::binary_search(adj[u].begin(), adj[u].end(), v);
  }
  // transporter: an element of GL_n(Q_p) sending the base class to vertex i
  qmat transporter(int i) const { return verts[i].basis_q(); }
};

inline building_patch enumerate_ball(i64 p, int n, int radius,
                                     std::size_t max_vertices = 2000000) {
  if (n < 2 || n > 3) throw budget_exceeded("enumerate_ball: only n = 2, 3");
  building_patch P;
  P.p = p;
  P.n = n;
  P.radius = radius;
  lattice base = lattice::standard(p, n);
  P.verts.push_back(base);
  P.depth.push_back(0);
  P.index[base.homothety_key()] = 0;
  P.adj.emplace_back();
  for (int frontier = 0; frontier < radius; ++frontier) {
    std::size_t count = P.verts.size();
    for (std::size_t v = 0; v < count; ++v) {
      if (P.depth[v] != frontier) continue;
      for (const lattice& M : incident_classes(P.verts[v])) {
        auto key = M.homothety_key();
        auto it = P.index.find(key);
        int id;
        if (it == P.index.end()) {
          if (P.verts.size() >= max_vertices)
            throw budget_exceeded("enumerate_ball: vertex budget");
          id = int(P.verts.size());
          P.verts.push_back(M);
          P.depth.push_back(frontier + 1);
          P.index[key] = id;
          P.adj.emplace_back();
        } else {
          id = it->second;
        }
        if (id != int(v)) {
          P.adj[v].push_back(id);
          P.adj[id].push_back(int(v));
        }
      }
    }
  }
  // the BFS above only walked edges out of interior vertices; add edges among
  // boundary vertices of the last shell by a direct incidence pass
  std::size_t count = P.verts.size();
  for (std::size_t v = 0; v < count; ++v) {
    if (P.depth[v] != radius) continue;
    for (const lattice& M : incident_classes(P.verts[v])) {
      auto it = P.index.find(M.homothety_key());
      if (it == P.index.end()) continue;
      int id = it->second;
      if (id != int(v)) {
        P.adj[v].push_back(id);
        P.adj[id].push_back(int(v));
      }
    }
  }
  for (auto& a : P.adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  // simplices: edges, plus (for n = 3) pairwise-adjacent triples
  for (std::size_t u = 0; u < count; ++u)
    for (int w : P.adj[u])
      if (std::size_t(w) > u) P.simplices.push_back({int(u), w});
  if (n == 3) {
    for (std::size_t u = 0; u < count; ++u)
      for (int v : P.adj[u]) {
        if (std::size_t(v) <= u) continue;
        for (int w : P.adj[v]) {
          if (w <= v) continue;
          if (P.adjacent(int(u), w)) P.simplices.push_back({int(u), v, w});
        }
      }
  }
  return P;
}

// The lattice chain corresponding to a simplex of the patch (vertex ids).
inline lattice_chain chain_of_simplex(const building_patch& P,
                                      const std::vector<int>& simplex) {
  if (simplex.empty()) throw malformed_chain("empty simplex");
  std::vector<lattice> members;
  const lattice& L0 = P.verts[simplex[0]];
  members.push_back(L0);
  for (std::size_t i = 1; i < simplex.size(); ++i) {
    // unique translate M with p L0 < M <= L0 (strict below, classes distinct)
    lattice M = P.verts[simplex[i]];
    bool placed = false;
    for (int k = -2 * P.n; k <= 2 * P.n && !placed; ++k) {
      lattice Mk = M.scaled_p(k);
      if (L0.contains(Mk) && Mk.contains(L0.scaled_p(1)) && Mk != L0) {
        members.push_back(Mk);
        placed = true;
      }
    }
    if (!placed) throw malformed_chain("vertices are not pairwise incident");
  }
  return lattice_chain::from_lattices(members);
}

// Inverse: the sorted vertex-id list of the simplex carrying a chain.
inline std::vector<int> simplex_of_chain(const building_patch& P,
                                         const lattice_chain& C) {
  std::vector<int> ids;
  for (const lattice& L : C.members()) ids.push_back(P.vertex_id(L));
  std::sort(ids.begin(), ids.end());
  return ids;
}

// A point of the geometric realization, in barycentric coordinates over a
// set of pairwise-incident vertices.  Zero weights are dropped, vertices
// sorted, weights sum to 1: the representation is canonical.
struct geom_point {
  std::vector<int> verts;
  std::vector<rat> w;

  void normalize() {
    std::vector<std::pair<int, rat>> pts;
    rat total(0);
    for (std::size_t i = 0; i < verts.size(); ++i) {
      if (w[i].is_zero()) continue;
      pts.push_back({verts[i], w[i]});
      total = total + w[i];
    }
    if (pts.empty() || !(total == rat(1)))
      throw error(errc::domain, "geom_point: weights must be positive, sum 1");
    std::sort(pts.begin(), pts.end());
    verts.clear();
    w.clear();
    for (auto& [v, c] : pts) {
      verts.push_back(v);
      w.push_back(c);
    }
  }

  friend bool operator==(const geom_point& a, const geom_point& b) {
    return a.verts == b.verts && a.w == b.w;
  }
};

inline geom_point isobarycenter(const std::vector<int>& simplex) {
  geom_point g;
  g.verts = simplex;
  g.w.assign(simplex.size(), rat(1, i64(simplex.size())));
  g.normalize();
  return g;
}

}  // namespace btchar
