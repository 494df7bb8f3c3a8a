#include <catch2/catch_amalgamated.hpp>

#include "btchar/padic.hpp"

using namespace btchar;

namespace {

std::shared_ptr<local_field> Qp(i64 p, int k = 12) {
  return std::make_shared<local_field>(p, k);
}

ppoly make_poly(std::shared_ptr<local_field> F, std::vector<rat> c) {
  ppoly P;
  P.F = std::move(F);
  P.c = std::move(c);
  return P;
}

}  // namespace

TEST_CASE("newton polygon: hull and slope convention") {
  auto F = Qp(5);
  // x^3 - p^2 x - p: points (0,1), (1,2), (3,0); (1,2) lies above the hull
  auto P = make_poly(F, {rat(-5), rat(-25), rat(0), rat(1)});
  auto np = newton_polygon(P);
  REQUIRE(np.segments.size() == 1);
  REQUIRE(np.segments[0].slope == rat(1, 3));
  REQUIRE(np.segments[0].length == 3);

  // (x - p)(x - p^2) = x^2 - (p + p^2)x + p^3: slopes 1 and 2
  auto Q = make_poly(F, {rat(125), rat(-30), rat(1)});
  auto nq = newton_polygon(Q);
  REQUIRE(nq.segments.size() == 2);
  REQUIRE(nq.segments[0].slope == rat(1));
  REQUIRE(nq.segments[0].length == 1);
  REQUIRE(nq.segments[1].slope == rat(2));
  REQUIRE(nq.segments[1].length == 1);
}

TEST_CASE("eisenstein and totally ramified certification") {
  auto F2 = Qp(2);
  auto P = make_poly(F2, {rat(-2), rat(0), rat(1)});  // x^2 - 2
  REQUIRE(certified_irreducible(P) == cert::yes);
  auto ef = ef_invariants(P);
  REQUIRE(ef.e == 2);
  REQUIRE(ef.f == 1);

  // x^4 + 2x^2 + 2u with u a 2-adic unit: slope 1/4, totally ramified
  auto Q = make_poly(F2, {rat(6), rat(0), rat(2), rat(0), rat(1)});
  auto efq = ef_invariants(Q);
  REQUIRE(efq.e == 4);
  REQUIRE(efq.f == 1);

  auto F5 = Qp(5);
  auto R = make_poly(F5, {rat(-5), rat(-25), rat(0), rat(1)});
  auto efr = ef_invariants(R);  // slope 1/3
  REQUIRE(efr.e == 3);
  REQUIRE(efr.f == 1);
}

TEST_CASE("unramified certification via residual irreducibility") {
  auto F2 = Qp(2);
  auto P = make_poly(F2, {rat(1), rat(1), rat(1)});  // x^2 + x + 1
  auto ef = ef_invariants(P);
  REQUIRE(ef.e == 1);
  REQUIRE(ef.f == 2);

  auto F5 = Qp(5);
  // x^2 - u: irreducible iff u is a non-square unit mod 5
  auto P2 = make_poly(F5, {rat(-2), rat(0), rat(1)});  // 2 non-square mod 5
  REQUIRE(certified_irreducible(P2) == cert::yes);
  REQUIRE(ef_invariants(P2).f == 2);
  auto P4 = make_poly(F5, {rat(-4), rat(0), rat(1)});  // 4 = 2^2
  REQUIRE(certified_irreducible(P4) == cert::no);

  auto F3 = Qp(3);
  auto C = make_poly(F3, {rat(1), rat(2), rat(0), rat(1)});  // x^3 + 2x + 1
  // no roots mod 3: 1, 1+2+1=4=1, -1+(-2)+1 != 0 -> irreducible, unramified
  REQUIRE(ef_invariants(C).e == 1);
  REQUIRE(ef_invariants(C).f == 3);
}

TEST_CASE("multiple slopes certify reducibility") {
  auto F5 = Qp(5);
  auto Q = make_poly(F5, {rat(125), rat(-30), rat(1)});
  REQUIRE(certified_irreducible(Q) == cert::no);
}

TEST_CASE("repeated residual root resolved by shifting") {
  auto F2 = Qp(2);
  // x^2 - 2x - 1: roots 1 +- sqrt(2), ramified quadratic after the shift
  auto P = make_poly(F2, {rat(-1), rat(-2), rat(1)});
  auto ef = ef_invariants(P);
  REQUIRE(ef.e == 2);
  REQUIRE(ef.f == 1);

  // x^2 - 2x - 3 = (x-3)(x+1): same residue (x+1)^2 mod 2, but reducible
  auto Q = make_poly(F2, {rat(-3), rat(-2), rat(1)});
  REQUIRE(certified_irreducible(Q) == cert::no);
}

TEST_CASE("scaling normalization for non-integral input") {
  auto F3 = Qp(3);
  // x^2 - 1/3: after x -> x/3 becomes x^2 - 3, Eisenstein
  auto P = make_poly(F3, {rat(-1, 3), rat(0), rat(1)});
  auto rep = analyze_poly(P);
  REQUIRE(rep.verdict == cert::yes);
  REQUIRE(rep.scaling_exponent == 1);
  REQUIRE(rep.ef.e == 2);
}

TEST_CASE("unsupported residual shape is reported, not guessed") {
  auto F2 = Qp(2);
  // residue (x^2+x+1)^2 mod 2: x^4 + x^2 + 3
  auto P = make_poly(F2, {rat(3), rat(0), rat(1), rat(0), rat(1)});
  auto rep = analyze_poly(P);
  REQUIRE(rep.verdict == cert::indeterminate);
  REQUIRE(rep.note.rfind("UnsupportedShape", 0) == 0);
  REQUIRE_THROWS_AS(ef_invariants(P), unsupported_shape);
}

TEST_CASE("certification is monotone in precision") {
  // (x - 127)(x - 255): the roots agree 2-adically to high order, so low
  // precision cannot separate them; raising precision certifies reducible.
  auto shallow = Qp(2, 3);
  auto deep = Qp(2, 12);
  std::vector<rat> c{rat(i64(127) * 255), rat(-382), rat(1)};
  auto P1 = make_poly(shallow, c);
  auto rep1 = analyze_poly(P1);
  REQUIRE(rep1.verdict == cert::indeterminate);
  REQUIRE_THROWS_AS(ef_invariants(P1), precision_insufficient);
  auto P2 = make_poly(deep, c);
  REQUIRE(analyze_poly(P2).verdict == cert::no);
}

TEST_CASE("padic scalar arithmetic and valuation in the base field") {
  auto F = Qp(5);
  padic a(F, rat(7, 3));
  REQUIRE(a.valuation() == 0);
  padic b(F, rat(50));
  REQUIRE(b.valuation() == 2);
  padic c(F, rat(1, 5));
  REQUIRE(c.valuation() == -1);
  REQUIRE((a * b).valuation() == 2);
  REQUIRE((b + c).valuation() == -1);
  padic z(F, 0);
  REQUIRE(z.valuation() == infinity_vp);
  // sum of opposites: representative vanishes, not certifiable as zero
  padic m(F, rat(-7, 3));
  REQUIRE_FALSE((a + m).valuation().has_value());
}

TEST_CASE("valuation and residue in a ramified extension") {
  auto E = std::make_shared<local_field>(2, 10, std::vector<i64>{-2, 0, 1});
  REQUIRE(E->ef().e == 2);
  REQUIRE(E->ef().f == 1);
  padic beta = padic::from_coeffs(E, {0, 1});  // sqrt(2)
  REQUIRE(beta.valuation() == 1);
  REQUIRE((beta * beta).valuation() == 2);
  padic two(E, 2);
  REQUIRE(two.valuation() == 2);  // v_E normalized: v_E(p) = e
  padic u = padic::from_coeffs(E, {1, 1});  // 1 + sqrt(2), a unit
  REQUIRE(u.valuation() == 0);
  gfq k(2, 1);
  REQUIRE(residue_image(u, k) == 1);
  REQUIRE(residue_image(beta, k) == 0);
}

TEST_CASE("residue image in an unramified extension") {
  auto E = std::make_shared<local_field>(2, 10, std::vector<i64>{1, 1, 1});
  REQUIRE(E->ef().e == 1);
  REQUIRE(E->ef().f == 2);
  gfq F4(2, 2);
  padic beta = padic::from_coeffs(E, {0, 1});
  i64 r = residue_image(beta, F4);
  REQUIRE(r != 0);
  // beta satisfies x^2 + x + 1, so its residue has multiplicative order 3
  REQUIRE(F4.mul(F4.mul(r, r), r) == 1);
  REQUIRE(F4.mul(r, r) != 1);
  // multiplicativity of the residue map on units, frozen sample
  padic u = padic::from_coeffs(E, {1, 1});
  REQUIRE(residue_image(u * beta, F4) == F4.mul(residue_image(u, F4), r));
  // residue field mismatch is rejected
  gfq F2(2, 1);
  REQUIRE_THROWS_AS(residue_image(beta, F2), error);
}

TEST_CASE("negative valuation rejected by residue map") {
  auto F = Qp(3);
  padic x(F, rat(1, 3));
  REQUIRE_THROWS_AS(residue_image(x, gfq(3, 1)), negative_valuation);
}
