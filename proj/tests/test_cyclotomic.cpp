#include <catch2/catch_amalgamated.hpp>

#include "btchar/cyclotomic.hpp"

using namespace btchar;

TEST_CASE("cyclotomic polynomials") {
  REQUIRE(cyclotomic_poly(1) == std::vector<i64>{-1, 1});
  REQUIRE(cyclotomic_poly(2) == std::vector<i64>{1, 1});
  REQUIRE(cyclotomic_poly(4) == std::vector<i64>{1, 0, 1});
  REQUIRE(cyclotomic_poly(6) == std::vector<i64>{1, -1, 1});
  REQUIRE(cyclotomic_poly(12) == std::vector<i64>{1, 0, -1, 0, 1});
  REQUIRE(cyclotomic_poly(30).size() == 9);   // phi(30) = 8
  REQUIRE(cyclotomic_poly(120).size() == 33); // phi(120) = 32
}

TEST_CASE("ring relations in Z[zeta_m]") {
  for (i64 m : {6, 8, 12, 30}) {
    cyc_ring R(m);
    // zeta^m = 1
    REQUIRE(R.mul(R.zeta(m - 1), R.zeta(1)) == R.one());
    // sum of all m-th roots of unity vanishes
    auto s = R.zero();
    for (i64 j = 0; j < m; ++j) s = R.add(s, R.zeta(j));
    REQUIRE(R.is_zero(s));
    // conj is the inverse on roots of unity
    for (i64 j = 0; j < m; ++j)
      REQUIRE(R.mul(R.zeta(j), R.conj(R.zeta(j))) == R.one());
    // conj is a ring homomorphism on a sample product
    auto a = R.add(R.zeta(1), R.from_int(2));
    auto b = R.sub(R.zeta(3), R.one());
    REQUIRE(R.conj(R.mul(a, b)) == R.mul(R.conj(a), R.conj(b)));
  }
}

TEST_CASE("integer detection and scalar ops") {
  cyc_ring R(12);
  i64 out;
  REQUIRE(R.is_int(R.from_int(-7), out));
  REQUIRE(out == -7);
  REQUIRE_FALSE(R.is_int(R.zeta(1), out));
  // zeta_12^3 = i, i^2 = -1
  auto i_ = R.zeta(3);
  REQUIRE(R.mul(i_, i_) == R.from_int(-1));
  REQUIRE(R.scal(R.one(), 5) == R.from_int(5));
}

TEST_CASE("embedding into a larger cyclotomic ring") {
  cyc_ring R6(6), R12(12);
  auto z = R6.zeta(1);
  auto z12 = embed_cyc(R6, R12, z);
  REQUIRE(z12 == R12.zeta(2));
  // embedding commutes with multiplication
  auto a = R6.add(R6.zeta(1), R6.from_int(3));
  auto b = R6.sub(R6.zeta(5), R6.from_int(1));
  REQUIRE(embed_cyc(R6, R12, R6.mul(a, b)) ==
          R12.mul(embed_cyc(R6, R12, a), embed_cyc(R6, R12, b)));
  REQUIRE_THROWS_AS(embed_cyc(R12, R6, R12.zero()), error);
}

TEST_CASE("modular evaluation cross-check") {
  cyc_ring R(8);
  // ell = 17, 2 has order 8 mod 17
  i64 ell = 17, t = 2;
  REQUIRE(powmod(t, 8, ell) == 1);
  REQUIRE(powmod(t, 4, ell) != 1);
  auto a = R.add(R.zeta(1), R.scal(R.zeta(5), 3));
  REQUIRE(R.eval_mod(a, t, ell) ==
          mod_pos(powmod(t, 1, ell) + 3 * powmod(t, 5, ell), ell));
}
