#include <catch2/catch_amalgamated.hpp>

#include "btchar/gfq.hpp"
#include "btchar/intutil.hpp"
#include "btchar/lattice.hpp"
#include "btchar/matz.hpp"

using namespace btchar;

TEST_CASE("rat arithmetic is exact and normalized") {
  rat a(3, 6), b(1, 3);
  REQUIRE(a == rat(1, 2));
  REQUIRE(a + b == rat(5, 6));
  REQUIRE(a * b == rat(1, 6));
  REQUIRE(a / b == rat(3, 2));
  REQUIRE((a - a).is_zero());
  REQUIRE(rat(-2, -4) == rat(1, 2));
  REQUIRE(rat(2, -4) == rat(-1, 2));
  REQUIRE(rat(8, 3).val(2) == 3);
  REQUIRE(rat(3, 8).val(2) == -3);
  REQUIRE(rat(0).val(5) == infinity_vp);
}

TEST_CASE("modular helpers") {
  REQUIRE(mod_pos(-7, 5) == 3);
  REQUIRE(powmod(3, 4, 7) == 4);
  REQUIRE(invmod(3, 7) == 5);
  REQUIRE(vp(40, 2) == 3);
  REQUIRE(is_prime(97));
  REQUIRE_FALSE(is_prime(91));
  i64 x, y;
  REQUIRE(ext_gcd(12, 18, x, y) == 6);
  REQUIRE(12 * x + 18 * y == 6);
}

TEST_CASE("gfq small field tables") {
  gfq F4(2, 2);
  // defining polynomial is x^2 + x + 1 (smallest irreducible over F_2)
  REQUIRE(F4.defining_poly() == std::vector<i64>{1, 1, 1});
  // t * t = t + 1 : code 2*2 = 3
  REQUIRE(F4.mul(2, 2) == 3);
  REQUIRE(F4.mul(2, 3) == 1);  // t(t+1) = t^2 + t = 1
  REQUIRE(F4.inv(2) == 3);
  REQUIRE(F4.pow(F4.generator(), 3) == 1);
  REQUIRE(F4.trace(2) == 1);  // tr(t) = t + t^2 = 1
  REQUIRE(F4.trace(1) == 0);  // tr(1) = 1 + 1 = 0

  gfq F9(3, 2);
  // multiplicative group cyclic of order 8
  i64 g = F9.generator();
  i64 x = g;
  int ord = 1;
  while (x != 1) {
    x = F9.mul(x, g);
    ++ord;
  }
  REQUIRE(ord == 8);
  for (i64 a = 1; a < 9; ++a) REQUIRE(F9.mul(a, F9.inv(a)) == 1);
  // Frobenius fixes exactly the prime field
  int fixed = 0;
  for (i64 a = 0; a < 9; ++a)
    if (F9.frob(a) == a) ++fixed;
  REQUIRE(fixed == 3);

  gfq F8(2, 3);
  REQUIRE(F8.q() == 8);
  i64 h = F8.generator();
  REQUIRE(F8.pow(h, 7) == 1);
  REQUIRE(F8.pow(h, 1) != 1);
}

TEST_CASE("hnf and integer kernel") {
  mat A(2, 2);
  A(0, 0) = 2;
  A(0, 1) = 1;
  A(1, 0) = 0;
  A(1, 1) = 3;
  mat H = hnf(A);
  // det preserved up to sign
  REQUIRE(det64(H) == 6);
  // upper triangular with positive diagonal
  REQUIRE(H(1, 0) == 0);
  REQUIRE(H(0, 0) > 0);
  REQUIRE(H(1, 1) > 0);

  mat B(2, 3);
  B(0, 0) = 1;
  B(0, 1) = 2;
  B(0, 2) = 3;
  B(1, 0) = 2;
  B(1, 1) = 4;
  B(1, 2) = 6;
  mat K = int_kernel(B);
  REQUIRE(K.cols == 2);
  for (int j = 0; j < K.cols; ++j) {
    for (int i = 0; i < 2; ++i) {
      i64 s = 0;
      for (int t = 0; t < 3; ++t) s += B(i, t) * K(t, j);
      REQUIRE(s == 0);
    }
  }
}

TEST_CASE("smith_span tracks a basis of the ambient lattice") {
  mat C(2, 2);
  C(0, 0) = 2;
  C(0, 1) = 1;
  C(1, 0) = 0;
  C(1, 1) = 4;
  auto sm = smith_span(C);
  // span(C) = span(W diag(d)) with W unimodular
  i64 dw = det64(sm.W);
  REQUIRE((dw == 1 || dw == -1));
  i128 prod = 1;
  for (i64 d : sm.d) prod *= d;
  REQUIRE((prod == 8 || prod == -8));
}

TEST_CASE("qmat charpoly") {
  mat M(2, 2);
  M(0, 0) = 1;
  M(0, 1) = 2;
  M(1, 0) = 3;
  M(1, 1) = 4;
  qmat Q(M);
  auto c = Q.charpoly();  // x^2 - 5x - 2
  REQUIRE(c[2] == rat(1));
  REQUIRE(c[1] == rat(-5));
  REQUIRE(c[0] == rat(-2));

  mat N = mat::identity(3);
  N(0, 1) = 7;
  qmat R(N);
  auto c3 = R.charpoly();  // (x-1)^3
  REQUIRE(c3[3] == rat(1));
  REQUIRE(c3[2] == rat(-3));
  REQUIRE(c3[1] == rat(3));
  REQUIRE(c3[0] == rat(-1));
  REQUIRE(R.inverse() * R == qmat::identity(3));
}

TEST_CASE("lattice canonical form is basis independent") {
  i64 p = 2;
  mat A(2, 2);
  A(0, 0) = 2;
  A(0, 1) = 1;
  A(1, 0) = 0;
  A(1, 1) = 3;
  lattice L = lattice::from_columns(p, A);
  // post-compose with a GL_2(Z) element: same lattice
  mat U(2, 2);
  U(0, 0) = 1;
  U(0, 1) = 4;
  U(1, 0) = 1;
  U(1, 1) = 5;  // det 1
  lattice L2 = lattice::from_columns(p, A * U);
  REQUIRE(L == L2);
  // 3 is a 2-adic unit, so the Z_2-span saturates the index-3 part
  REQUIRE(L.det_val() == 1);
}

TEST_CASE("lattice containment, sum, intersection") {
  i64 p = 3;
  lattice std2 = lattice::standard(p, 2);
  lattice M = std2.scaled_p(1);  // 3 Z_3^2
  REQUIRE(std2.contains(M));
  REQUIRE_FALSE(M.contains(std2));
  REQUIRE(intersect(std2, M) == M);
  REQUIRE(std2 + M == std2);

  mat A(2, 2);
  A(0, 0) = 3;
  A(0, 1) = 0;
  A(1, 0) = 0;
  A(1, 1) = 1;
  lattice L = lattice::from_columns(p, A);  // span(3e1, e2)
  REQUIRE(std2.contains(L));
  REQUIRE(intersect(L, M) == M);  // M = 3Z^2 is already inside L
  lattice S = L + M;
  REQUIRE(S == L);  // M subset L
  REQUIRE(L.det_val() == 1);
  std::vector<int> dv{0, 1};
  REQUIRE(L.divisor_exponents() == dv);
}

TEST_CASE("lattice image under rational matrices") {
  i64 p = 2;
  lattice std2 = lattice::standard(p, 2);
  qmat g(2);
  g(0, 0) = rat(1, 2);
  g(0, 1) = rat(0);
  g(1, 0) = rat(0);
  g(1, 1) = rat(1);
  lattice L = std2.apply(g);  // span(e1/2, e2)
  REQUIRE(L.contains(std2));
  REQUIRE(L.denom() == 1);
  REQUIRE(L.det_val() == -1);
  // applying g then g^{-1} round-trips
  REQUIRE(L.apply(g.inverse()) == std2);
  // prime-to-p denominators act by units: (1/3) Z_2^2 = Z_2^2
  qmat h = qmat::identity(2);
  h(0, 0) = rat(1, 3);
  h(1, 1) = rat(5, 7);
  REQUIRE(std2.apply(h) == std2);
}

TEST_CASE("homothety representatives") {
  i64 p = 5;
  lattice std2 = lattice::standard(p, 2);
  REQUIRE(std2.scaled_p(3).homothety_key() == std2.homothety_key());
  REQUIRE(std2.scaled_p(-2).homothety_key() == std2.homothety_key());
  mat A(2, 2);
  A(0, 0) = 5;
  A(1, 1) = 1;
  lattice L = lattice::from_columns(p, A);
  REQUIRE(L.homothety_key() != std2.homothety_key());
}

TEST_CASE("adapted basis exponents") {
  i64 p = 2;
  lattice L = lattice::standard(p, 2);
  mat A(2, 2);
  A(0, 0) = 4;
  A(0, 1) = 1;
  A(1, 0) = 0;
  A(1, 1) = 1;
  // M = span(4e1, e1+e2): elementary divisors 1, 4
  lattice M = lattice::from_columns(p, A);
  auto ab = adapted_basis(L, M);
  std::vector<int> exps = ab.exp;
  std::sort(exps.begin(), exps.end());
  REQUIRE(exps == std::vector<int>{0, 2});
  // columns of U form a basis of L
  lattice Lu = lattice::from_columns(
      p,
      [&] {
        mat C(2, 2);
        i64 D = 1;
        for (auto& e : ab.U.a) D = std::lcm(D, e.d);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) C(i, j) = (ab.U(i, j) * rat(D)).n;
        return C;
      }(),
      vp(1, p));
  REQUIRE(Lu.det_val() == L.det_val());
  // and p^{a_j} u_j spans M
  for (int j = 0; j < 2; ++j) {
    std::vector<rat> col(2);
    for (int i = 0; i < 2; ++i)
      col[i] = ab.U(i, j) * rat(ipow(p, ab.exp[j]));
    REQUIRE(M.contains(col));
  }
}
