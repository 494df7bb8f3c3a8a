#include <catch2/catch_amalgamated.hpp>

#include "btchar/building.hpp"

using namespace btchar;

namespace {

int count_depth(const building_patch& P, int d) {
  int c = 0;
  for (int x : P.depth)
    if (x == d) ++c;
  return c;
}

}  // namespace

TEST_CASE("tree ball sizes for n = 2") {
  auto P2 = enumerate_ball(2, 2, 3);
  REQUIRE(P2.verts.size() == 22);  // 1 + 3 + 6 + 12
  REQUIRE(count_depth(P2, 0) == 1);
  REQUIRE(count_depth(P2, 1) == 3);
  REQUIRE(count_depth(P2, 2) == 6);
  REQUIRE(count_depth(P2, 3) == 12);
  REQUIRE(P2.simplices.size() == 21);  // tree: |V| - 1 edges

  auto P3 = enumerate_ball(3, 2, 2);
  REQUIRE(P3.verts.size() == 17);  // 1 + 4 + 12
  REQUIRE(P3.simplices.size() == 16);
  // interior vertices have degree p + 1
  for (std::size_t v = 0; v < P3.verts.size(); ++v)
    if (P3.depth[v] < P3.radius) REQUIRE(P3.adj[v].size() == 4);
}

TEST_CASE("rank-2 building ball for n = 3") {
  auto P = enumerate_ball(2, 3, 1);
  REQUIRE(P.verts.size() == 15);  // base + 7 lines + 7 planes
  int edges = 0, tris = 0;
  for (auto& s : P.simplices) {
    if (s.size() == 2) ++edges;
    if (s.size() == 3) ++tris;
  }
  REQUIRE(edges == 35);  // 14 at the base + 21 incident line/plane pairs
  REQUIRE(tris == 21);   // chambers through the base = full flags of F_2^3
  // every triangle contains the base vertex at radius 1
  for (auto& s : P.simplices)
    if (s.size() == 3) REQUIRE(s[0] == P.base());
}

TEST_CASE("simplex/chain round trip") {
  for (auto [p, n, r] : {std::tuple<i64, int, int>{2, 2, 3},
                         {3, 2, 2},
                         {2, 3, 1}}) {
    auto P = enumerate_ball(p, n, r);
    for (const auto& s : P.simplices) {
      auto C = chain_of_simplex(P, s);
      REQUIRE(C.period() == int(s.size()));
      auto s2 = simplex_of_chain(P, C);
      std::vector<int> want = s;
      std::sort(want.begin(), want.end());
      REQUIRE(s2 == want);
    }
    // vertices round trip as period-1 chains
    for (std::size_t v = 0; v < P.verts.size(); ++v) {
      auto C = lattice_chain::from_lattices({P.verts[v]});
      REQUIRE(simplex_of_chain(P, C) == std::vector<int>{int(v)});
    }
  }
}

TEST_CASE("face relation reverses order inclusion") {
  auto P = enumerate_ball(2, 2, 2);
  for (const auto& s : P.simplices) {
    auto C = chain_of_simplex(P, s);
    for (int v : s) {
      auto F = lattice_chain::from_lattices({P.verts[v]});
      REQUIRE(order_contains(F, C));
      REQUIRE_FALSE(order_contains(C, F));
    }
  }
  auto P3 = enumerate_ball(2, 3, 1);
  for (const auto& s : P3.simplices) {
    if (s.size() != 3) continue;
    auto C = chain_of_simplex(P3, s);
    // every edge face of a chamber sits between chamber and vertex orders
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        auto E = chain_of_simplex(P3, {s[i], s[j]});
        REQUIRE(order_contains(E, C));
        REQUIRE_FALSE(order_contains(C, E));
      }
  }
}

TEST_CASE("transporters move the base vertex") {
  auto P = enumerate_ball(3, 2, 2);
  lattice base = lattice::standard(3, 2);
  for (std::size_t v = 0; v < P.verts.size(); ++v) {
    qmat g = P.transporter(int(v));
    lattice img = base.apply(g);
    REQUIRE(img.homothety_key() == P.verts[v].homothety_key());
  }
}

TEST_CASE("adjacency is symmetric and distance-compatible") {
  auto P = enumerate_ball(2, 2, 4);
  for (std::size_t v = 0; v < P.verts.size(); ++v)
    for (int w : P.adj[v]) {
      REQUIRE(P.adjacent(w, int(v)));
      REQUIRE(std::abs(P.depth[v] - P.depth[w]) == 1);  // tree case
    }
}

TEST_CASE("patch lookups outside the ball fail loudly") {
  auto P = enumerate_ball(2, 2, 1);
  mat A(2, 2);
  A(0, 0) = 4;
  A(1, 1) = 1;  // distance 2 from the base
  lattice far = lattice::from_columns(2, A);
  REQUIRE_FALSE(P.has_vertex(far));
  REQUIRE_THROWS_AS(P.vertex_id(far), patch_too_small);
}

TEST_CASE("geometric points and isobarycenters") {
  auto g = isobarycenter({3, 1});
  REQUIRE(g.verts == std::vector<int>{1, 3});
  REQUIRE(g.w == std::vector<rat>{rat(1, 2), rat(1, 2)});
  geom_point h;
  h.verts = {1, 3, 5};
  h.w = {rat(1, 2), rat(1, 2), rat(0)};
  h.normalize();
  REQUIRE(h == g);  // zero weights are dropped
  geom_point bad;
  bad.verts = {0};
  bad.w = {rat(1, 2)};
  REQUIRE_THROWS_AS(bad.normalize(), error);
}
