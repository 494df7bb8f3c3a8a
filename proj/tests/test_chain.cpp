#include <catch2/catch_amalgamated.hpp>

#include "btchar/chain.hpp"

using namespace btchar;

namespace {

qmat Q2(std::vector<rat> e) {
  qmat g(2);
  g.a = std::move(e);
  return g;
}

lattice diag_lattice(i64 p, std::vector<int> exps) {
  int n = int(exps.size());
  mat A(n, n);
  for (int i = 0; i < n; ++i) A(i, i) = ipow(p, exps[i]);
  return lattice::from_columns(p, A);
}

}  // namespace

TEST_CASE("chain canonical form is independent of presentation") {
  i64 p = 2;
  lattice L0 = lattice::standard(p, 2);
  lattice L1 = diag_lattice(p, {1, 0});  // span(2e1, e2)
  auto C1 = lattice_chain::from_lattices({L0, L1});
  // present the same chain by translated members, in the other order
  auto C2 = lattice_chain::from_lattices({L1.scaled_p(3), L0.scaled_p(-2)});
  REQUIRE(C1 == C2);
  REQUIRE(C1.period() == 2);
  REQUIRE(C1.at(0) == L0);
  REQUIRE(C1.at(1) == L1);
  REQUIRE(C1.at(2) == L0.scaled_p(1));
  REQUIRE(C1.at(-1) == L1.scaled_p(-1));
}

TEST_CASE("malformed chains are rejected") {
  i64 p = 2;
  lattice L0 = lattice::standard(p, 2);
  // not nested: span(2e1, e2) and span(e1, 2e2) are incomparable
  lattice A = diag_lattice(p, {1, 0});
  lattice B = diag_lattice(p, {0, 1});
  REQUIRE_THROWS_AS(lattice_chain::from_lattices({A, B}), malformed_chain);
  // three distinct homothety classes can never chain in dimension 2
  REQUIRE_THROWS_AS(
      lattice_chain::from_lattices({L0, A, diag_lattice(p, {2, 0})}),
      malformed_chain);
}

TEST_CASE("hereditary order invariants") {
  i64 p = 3;
  lattice L0 = lattice::standard(p, 2);
  lattice L1 = diag_lattice(p, {1, 0});
  hereditary_order vert(lattice_chain::from_lattices({L0}));
  hereditary_order iwa(lattice_chain::from_lattices({L0, L1}));
  REQUIRE(vert.invariant() == std::vector<int>{2});
  REQUIRE(iwa.invariant() == std::vector<int>{1, 1});

  hereditary_order vert3(
      lattice_chain::from_lattices({lattice::standard(p, 3)}));
  hereditary_order iwa3(lattice_chain::from_lattices(
      {lattice::standard(p, 3), diag_lattice(p, {1, 0, 0}),
       diag_lattice(p, {1, 1, 0})}));
  REQUIRE(vert3.invariant() == std::vector<int>{3});
  REQUIRE(iwa3.invariant() == std::vector<int>{1, 1, 1});
}

TEST_CASE("unit group membership: vertex and Iwahori") {
  i64 p = 2;
  lattice L0 = lattice::standard(p, 2);
  lattice L1 = diag_lattice(p, {1, 0});  // span(pe1, e2)
  hereditary_order vert(lattice_chain::from_lattices({L0}));
  hereditary_order iwa(lattice_chain::from_lattices({L0, L1}));

  qmat upper = Q2({rat(1), rat(1), rat(0), rat(1)});
  qmat lower = Q2({rat(1), rat(0), rat(1), rat(1)});
  REQUIRE(vert.in_U(upper));
  REQUIRE(vert.in_U(lower));
  // with L_1 = span(pe1, e2) the Iwahori condition is p | upper-right entry
  REQUIRE_FALSE(iwa.in_U(upper));
  REQUIRE(iwa.in_U(lower));
  REQUIRE(iwa.in_U(Q2({rat(1), rat(2), rat(3), rat(1)})));

  // non-unit determinant
  qmat scal = Q2({rat(2), rat(0), rat(0), rat(2)});
  REQUIRE_FALSE(vert.in_U(scal));
  REQUIRE(vert.in_order(scal));
  REQUIRE(vert.in_radical(scal));
}

TEST_CASE("principal congruence subgroup U^1") {
  i64 p = 3;
  lattice L0 = lattice::standard(p, 2);
  hereditary_order vert(lattice_chain::from_lattices({L0}));
  REQUIRE(vert.in_U1(Q2({rat(4), rat(3), rat(6), rat(1)})));
  REQUIRE_FALSE(vert.in_U1(Q2({rat(4), rat(1), rat(6), rat(1)})));

  lattice L1 = diag_lattice(p, {1, 0});
  hereditary_order iwa(lattice_chain::from_lattices({L0, L1}));
  // 1 + rad(A): diagonal 1 mod p, upper-right 0 mod p, lower-left anything
  REQUIRE(iwa.in_U1(Q2({rat(1), rat(3), rat(2), rat(4)})));
  REQUIRE_FALSE(iwa.in_U1(Q2({rat(1), rat(1), rat(0), rat(1)})));
  REQUIRE_FALSE(iwa.in_U1(Q2({rat(2), rat(3), rat(0), rat(1)})));
}

TEST_CASE("normalizer shifts") {
  i64 p = 5;
  lattice L0 = lattice::standard(p, 2);
  lattice L1 = diag_lattice(p, {1, 0});
  hereditary_order vert(lattice_chain::from_lattices({L0}));
  hereditary_order iwa(lattice_chain::from_lattices({L0, L1}));

  qmat Pi = Q2({rat(0), rat(5), rat(1), rat(0)});  // uniformizing element
  auto s = iwa.normalizer_shift(Pi);
  REQUIRE(s.has_value());
  REQUIRE(*s == 1);
  REQUIRE_FALSE(vert.normalizer_shift(Pi).has_value());

  // scalars shift a vertex chain by n per power of p
  qmat pz = Q2({rat(5), rat(0), rat(0), rat(5)});
  auto sv = vert.normalizer_shift(pz);
  REQUIRE(sv.has_value());
  REQUIRE(*sv == 1);
  auto si = iwa.normalizer_shift(pz);
  REQUIRE(si.has_value());
  REQUIRE(*si == 2);

  // units of U(A) normalize with shift 0
  auto su = iwa.normalizer_shift(Q2({rat(1), rat(0), rat(2), rat(1)}));
  REQUIRE(su.has_value());
  REQUIRE(*su == 0);
  // elements outside the normalizer
  REQUIRE_FALSE(iwa.normalizer_shift(Q2({rat(1), rat(1), rat(0), rat(1)}))
                    .has_value());
}

TEST_CASE("order lattices realize the inclusion-reversing bijection") {
  i64 p = 2;
  lattice L0 = lattice::standard(p, 2);
  lattice L1 = diag_lattice(p, {1, 0});
  auto vert = lattice_chain::from_lattices({L0});
  auto vert1 = lattice_chain::from_lattices({L1});
  auto edge = lattice_chain::from_lattices({L0, L1});
  // larger simplex (finer chain) -> smaller order
  REQUIRE(order_contains(vert, edge));
  REQUIRE(order_contains(vert1, edge));
  REQUIRE_FALSE(order_contains(edge, vert));
  REQUIRE_FALSE(order_contains(vert, vert1));
  REQUIRE(order_contains(vert, vert));
  // the order lattice has full rank n^2 and contains 1
  lattice OA = order_lattice(edge);
  std::vector<rat> one{rat(1), rat(0), rat(0), rat(1)};
  REQUIRE(OA.contains(one));
}

TEST_CASE("membership in A(chain) agrees with the order lattice") {
  i64 p = 3;
  lattice L0 = lattice::standard(p, 2);
  lattice L1 = diag_lattice(p, {1, 0});
  auto edge = lattice_chain::from_lattices({L0, L1});
  hereditary_order A(edge);
  lattice OA = order_lattice(edge);
  // sample rational matrices, compare the two membership routes
  std::vector<qmat> samples;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b) {
      samples.push_back(Q2({rat(a), rat(b), rat(1), rat(0)}));
      samples.push_back(Q2({rat(a), rat(b, 3), rat(3), rat(1)}));
    }
  for (const auto& g : samples) {
    std::vector<rat> v{g(0, 0), g(0, 1), g(1, 0), g(1, 1)};
    REQUIRE(A.in_order(g) == OA.contains(v));
  }
}

TEST_CASE("parahoric quotient maps to products of GL(m_i, p)") {
  i64 p = 3;
  lattice L0 = lattice::standard(p, 2);
  lattice L1 = diag_lattice(p, {1, 0});
  hereditary_order vert(lattice_chain::from_lattices({L0}));
  hereditary_order iwa(lattice_chain::from_lattices({L0, L1}));

  qmat g = Q2({rat(2), rat(3), rat(4), rat(5)});
  auto qv = parahoric_quotient(vert, g);
  REQUIRE(qv.blocks.size() == 1);
  REQUIRE(qv.blocks[0].rows == 2);
  // the map is a homomorphism modulo U^1
  qmat h = Q2({rat(1), rat(1), rat(2), rat(1)});
  auto qg = parahoric_quotient(vert, g);
  auto qh = parahoric_quotient(vert, h);
  auto qgh = parahoric_quotient(vert, g * h);
  mat prod(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      i64 s = 0;
      for (int t = 0; t < 2; ++t)
        s += qg.blocks[0](i, t) * qh.blocks[0](t, j);
      prod(i, j) = mod_pos(s, p);
    }
  REQUIRE(qgh.blocks[0] == prod);
  // kernel is exactly U^1
  qmat u1 = Q2({rat(4), rat(3), rat(6), rat(1)});
  auto q1 = parahoric_quotient(vert, u1);
  REQUIRE(q1.blocks[0] == mat::identity(2));

  qmat gi = Q2({rat(2), rat(3), rat(1), rat(1)});
  auto qi = parahoric_quotient(iwa, gi);
  REQUIRE(qi.blocks.size() == 2);
  REQUIRE(qi.blocks[0].rows == 1);
  REQUIRE(qi.blocks[1].rows == 1);
  // elements not in U(A) are rejected
  REQUIRE_THROWS_AS(parahoric_quotient(iwa, Q2({rat(1), rat(1), rat(0), rat(1)})),
                    element_not_in_parahoric);
}
