#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "btchar/finitegl.hpp"

using namespace btchar;

namespace {

std::multiset<i64> degree_multiset(const fgl_table& T) {
  return {T.degrees.begin(), T.degrees.end()};
}

void check_orthogonality(const fgl_table& T) {
  for (int i = 0; i < T.num_irr(); ++i)
    for (int j = i; j < T.num_irr(); ++j) {
      i64 ip = inner_product(T, T.chars[i], T.chars[j]);
      REQUIRE(ip == (i == j ? 1 : 0));
    }
  // column orthogonality: sum over irreducibles = centralizer order
  const cyc_ring& R = *T.ring;
  for (int k = 0; k < T.G->num_classes(); ++k)
    for (int l = 0; l < T.G->num_classes(); ++l) {
      auto acc = R.zero();
      for (int i = 0; i < T.num_irr(); ++i)
        acc = R.add(acc, R.mul(T.chars[i][k], R.conj(T.chars[i][l])));
      i64 v;
      REQUIRE(R.is_int(acc, v));
      if (k == l)
        REQUIRE(v == T.G->order() / T.G->class_size(k));
      else
        REQUIRE(v == 0);
    }
}

}  // namespace

TEST_CASE("group structure constants") {
  fgl_group G22(2, 2, 1);
  REQUIRE(G22.order() == 6);
  REQUIRE(G22.num_classes() == 3);
  REQUIRE(G22.exponent() == 6);

  fgl_group G23(2, 3, 1);
  REQUIRE(G23.order() == 48);
  REQUIRE(G23.num_classes() == 8);

  fgl_group G24(2, 2, 2);
  REQUIRE(G24.order() == 180);
  REQUIRE(G24.num_classes() == 15);
  REQUIRE(G24.exponent() == 30);

  fgl_group G25(2, 5, 1);
  REQUIRE(G25.order() == 480);
  REQUIRE(G25.num_classes() == 24);
  REQUIRE(G25.exponent() == 120);

  fgl_group G32(3, 2, 1);
  REQUIRE(G32.order() == 168);
  REQUIRE(G32.num_classes() == 6);

  fgl_group G15(1, 5, 1);
  REQUIRE(G15.order() == 4);
  REQUIRE(G15.num_classes() == 4);
}

TEST_CASE("character table of GL(1, q)") {
  auto T = character_table(std::make_shared<fgl_group>(1, 5, 1));
  REQUIRE(T.num_irr() == 4);
  for (i64 d : T.degrees) REQUIRE(d == 1);
  check_orthogonality(T);
}

TEST_CASE("character table of GL(2, 2)") {
  auto T = character_table(std::make_shared<fgl_group>(2, 2, 1));
  REQUIRE(degree_multiset(T) == std::multiset<i64>{1, 1, 2});
  check_orthogonality(T);
  // the unique cuspidal is the sign character of S3 (degree q - 1 = 1);
  // it sorts before the trivial character in the lexicographic row order
  REQUIRE(cuspidal_rows(T) == std::vector<int>{0});
  REQUIRE(T.degrees[0] == 1);
}

TEST_CASE("character table of GL(2, 3)") {
  auto T = character_table(std::make_shared<fgl_group>(2, 3, 1));
  REQUIRE(degree_multiset(T) ==
          std::multiset<i64>{1, 1, 2, 2, 2, 3, 3, 4});
  check_orthogonality(T);
  auto cr = cuspidal_rows(T);
  REQUIRE(cr.size() == 3);  // (q^2 - q)/2
  for (int i : cr) REQUIRE(T.degrees[i] == 2);  // cuspidal degree q - 1
}

TEST_CASE("character table of GL(2, 4)") {
  auto T = character_table(std::make_shared<fgl_group>(2, 2, 2));
  std::multiset<i64> want;
  for (int i = 0; i < 3; ++i) want.insert(1);
  for (int i = 0; i < 6; ++i) want.insert(3);
  for (int i = 0; i < 3; ++i) want.insert(4);
  for (int i = 0; i < 3; ++i) want.insert(5);
  REQUIRE(degree_multiset(T) == want);
  check_orthogonality(T);
  auto cr = cuspidal_rows(T);
  REQUIRE(cr.size() == 6);
  for (int i : cr) REQUIRE(T.degrees[i] == 3);
}

TEST_CASE("character table of GL(2, 5)") {
  auto T = character_table(std::make_shared<fgl_group>(2, 5, 1));
  std::multiset<i64> want;
  for (int i = 0; i < 4; ++i) want.insert(1);
  for (int i = 0; i < 10; ++i) want.insert(4);
  for (int i = 0; i < 4; ++i) want.insert(5);
  for (int i = 0; i < 6; ++i) want.insert(6);
  REQUIRE(degree_multiset(T) == want);
  check_orthogonality(T);
  auto cr = cuspidal_rows(T);
  REQUIRE(cr.size() == 10);
  for (int i : cr) REQUIRE(T.degrees[i] == 4);
}

TEST_CASE("character table of GL(3, 2)") {
  auto T = character_table(std::make_shared<fgl_group>(3, 2, 1));
  REQUIRE(degree_multiset(T) == std::multiset<i64>{1, 3, 3, 6, 7, 8});
  check_orthogonality(T);
  auto cr = cuspidal_rows(T);
  REQUIRE(cr.size() == 2);
  for (int i : cr) REQUIRE(T.degrees[i] == 3);
}

TEST_CASE("principal series decomposition for GL(2, 3)") {
  auto T = character_table(std::make_shared<fgl_group>(2, 3, 1));
  // distinct characters of the torus: irreducible of degree q + 1
  auto ps = principal_series(T, {0, 1});
  auto m = decompose(T, ps);
  i64 total = 0, deg = 0;
  for (int i = 0; i < T.num_irr(); ++i) {
    total += m[i];
    deg += m[i] * T.degrees[i];
  }
  REQUIRE(total == 1);
  REQUIRE(deg == 4);
  // equal characters: 1-dim twist + twisted Steinberg of degree q
  auto ps2 = principal_series(T, {1, 1});
  auto m2 = decompose(T, ps2);
  std::multiset<i64> parts;
  for (int i = 0; i < T.num_irr(); ++i)
    for (i64 t = 0; t < m2[i]; ++t) parts.insert(T.degrees[i]);
  REQUIRE(parts == std::multiset<i64>{1, 3});
}

TEST_CASE("no cuspidal appears in any principal series") {
  auto T = character_table(std::make_shared<fgl_group>(2, 3, 1));
  auto cr = cuspidal_rows(T);
  for (i64 a = 0; a < 2; ++a)
    for (i64 b = 0; b < 2; ++b) {
      auto m = decompose(T, principal_series(T, {a, b}));
      for (int i : cr) REQUIRE(m[i] == 0);
    }
}

TEST_CASE("Gelfand-Graev genericity") {
  for (auto [n, p, f] : {std::tuple<int, i64, int>{2, 2, 1},
                         {2, 3, 1},
                         {2, 2, 2},
                         {3, 2, 1}}) {
    auto T = character_table(std::make_shared<fgl_group>(n, p, f));
    auto gg = gelfand_graev(T);
    i64 q = T.G->q();
    i64 nongeneric = 0, genus_deg = 0;
    for (int i = 0; i < T.num_irr(); ++i) {
      bool gen = is_generic(T, T.chars[i], &gg);
      if (!gen)
        ++nongeneric;
      else
        genus_deg += T.degrees[i];
    }
    // Gelfand-Graev is multiplicity free and contains each generic once
    i64 usize = 1;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) usize *= q;
    REQUIRE(genus_deg == T.G->order() / usize);
    if (n == 2) REQUIRE(nongeneric == q - 1);  // exactly the 1-dim characters
  }
}

TEST_CASE("cuspidal characters are generic") {
  auto T = character_table(std::make_shared<fgl_group>(2, 3, 1));
  auto gg = gelfand_graev(T);
  for (int i : cuspidal_rows(T)) REQUIRE(is_generic(T, T.chars[i], &gg));
}

TEST_CASE("generalized Steinberg") {
  for (auto [n, p, f] : {std::tuple<int, i64, int>{2, 2, 1},
                         {2, 3, 1},
                         {2, 2, 2},
                         {2, 5, 1}}) {
    auto T = character_table(std::make_shared<fgl_group>(n, p, f));
    for (i64 a = 0; a < T.G->q() - 1; ++a) {
      auto st = generalized_steinberg(T, a);
      REQUIRE(st.degree == T.G->q());
      // Steinberg twists for distinct a are distinct
      for (i64 b = 0; b < a; ++b)
        REQUIRE(generalized_steinberg(T, b).irr_index != st.irr_index);
    }
  }
}

TEST_CASE("deterministic table output") {
  auto T1 = character_table(std::make_shared<fgl_group>(2, 3, 1));
  auto T2 = character_table(std::make_shared<fgl_group>(2, 3, 1));
  REQUIRE(T1.degrees == T2.degrees);
  REQUIRE(T1.chars == T2.chars);
}
