#include <vector>

#include "doctest.h"
#include "splitkit/errors.hpp"
#include "splitkit/free_algebra.hpp"

using namespace splitkit;

TEST_SUITE("free_algebra") {

TEST_CASE("enumerate_words: count, order, range") {
  auto w22 = enumerate_words(2, 2);
  REQUIRE(w22.size() == 4);
  CHECK(w22[0] == Word{1, 1});
  CHECK(w22[1] == Word{1, 2});
  CHECK(w22[2] == Word{2, 1});
  CHECK(w22[3] == Word{2, 2});
  CHECK(enumerate_words(2, 3).size() == 8);
  CHECK(enumerate_words(3, 2).size() == 9);
  CHECK(enumerate_words(7, 4).size() == 2401);
  CHECK_THROWS_AS(enumerate_words(2, 5), ValidationError);
  CHECK_THROWS_AS(enumerate_words(8, 2), ValidationError);
  CHECK_THROWS_AS(enumerate_words(2, 0), ValidationError);
}

TEST_CASE("mul concatenates with the first factor on the left") {
  // exp(cA1) * exp(cA2): the word (1,2) picks up c^2, the word (2,1) nothing.
  Rational c(1, 3);
  auto p = mul(exp_single(1, c, 2, 3), exp_single(2, c, 2, 3));
  CHECK(p.at(Word{1, 2}) == c * c);
  CHECK(p.at(Word{2, 1}) == 0);
  CHECK(p.at(Word{1}) == c);
  CHECK(p.at(Word{1, 1}) == c * c / 2);
  CHECK(p.at(Word{1, 1, 2}) == c * c * c / 2);
  CHECK(p.at(Word{1, 2, 2}) == c * c * c / 2);
  CHECK(p.at(Word{2, 1, 1}) == 0);
}

TEST_CASE("exp/log are mutually inverse at the truncation degree") {
  auto s = mul(exp_single(1, Rational(1, 2), 2, 4), exp_single(2, Rational(1, 3), 2, 4));
  auto back = exp_truncated(log_truncated(s));
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) CHECK(back.coeffs[i] == s.coeffs[i]);

  auto l = log_truncated(exp_single(1, Rational(5, 7), 2, 4));
  CHECK(l.at(Word{1}) == Rational(5, 7));
  CHECK(l.at(Word{1, 1}) == 0);
  CHECK(l.at(Word{1, 1, 1}) == 0);
}

TEST_CASE("log requires a unit constant term, exp a zero one") {
  FreePoly<Rational> z = FreePoly<Rational>::zero(2, 2);
  CHECK_THROWS_AS(log_truncated(z), ValidationError);
  CHECK_THROWS_AS(exp_truncated(FreePoly<Rational>::unit(2, 2)), ValidationError);
}

TEST_CASE("is_lyndon on small words") {
  CHECK(is_lyndon(Word{1}));
  CHECK(is_lyndon(Word{2}));
  CHECK(is_lyndon(Word{1, 2}));
  CHECK_FALSE(is_lyndon(Word{2, 1}));
  CHECK_FALSE(is_lyndon(Word{1, 1}));
  CHECK(is_lyndon(Word{1, 1, 2}));
  CHECK(is_lyndon(Word{1, 2, 2}));
  CHECK_FALSE(is_lyndon(Word{1, 2, 1}));
  CHECK_FALSE(is_lyndon(Word{}));
}

TEST_CASE("necklace counts match the enumeration") {
  CHECK(lyndon_count(2, 1) == 2);
  CHECK(lyndon_count(2, 2) == 1);
  CHECK(lyndon_count(2, 3) == 2);
  CHECK(lyndon_count(2, 4) == 3);
  CHECK(lyndon_count(3, 2) == 3);
  CHECK(lyndon_count(3, 3) == 8);
  CHECK(lyndon_count(4, 3) == 20);
  for (int n = 2; n <= 4; ++n)
    for (int d = 2; d <= 4; ++d) CHECK(lyndon_words(n, d).size() == lyndon_count(n, d));
}

TEST_CASE("lyndon_words in lexicographic order") {
  auto w = lyndon_words(2, 3);
  REQUIRE(w.size() == 2);
  CHECK(w[0] == Word{1, 1, 2});
  CHECK(w[1] == Word{1, 2, 2});
  auto w4 = lyndon_words(2, 4);
  REQUIRE(w4.size() == 3);
  CHECK(w4[0] == Word{1, 1, 1, 2});
  CHECK(w4[1] == Word{1, 1, 2, 2});
  CHECK(w4[2] == Word{1, 2, 2, 2});
}

TEST_CASE("standard factorization splits at the smallest suffix") {
  auto [u1, v1] = standard_factorization(Word{1, 1, 2});
  CHECK(u1 == Word{1});
  CHECK(v1 == Word{1, 2});
  auto [u2, v2] = standard_factorization(Word{1, 2, 2});
  CHECK(u2 == Word{1, 2});
  CHECK(v2 == Word{2});
  CHECK_THROWS_AS(standard_factorization(Word{1}), ValidationError);
}

TEST_CASE("lyndon basis brackets expand correctly") {
  auto basis = lyndon_basis(2, 3);
  REQUIRE(basis.size() == 2);
  CHECK(basis[0].bracketing == "[1,[1,2]]");
  CHECK(basis[1].bracketing == "[[1,2],2]");
  // [A1,[A1,A2]] = A1A1A2 - 2 A1A2A1 + A2A1A1
  CHECK(basis[0].expansion.at(Word{1, 1, 2}) == 1);
  CHECK(basis[0].expansion.at(Word{1, 2, 1}) == -2);
  CHECK(basis[0].expansion.at(Word{2, 1, 1}) == 1);
  // [[A1,A2],A2] = A1A2A2 - 2 A2A1A2 + A2A2A1
  CHECK(basis[1].expansion.at(Word{1, 2, 2}) == 1);
  CHECK(basis[1].expansion.at(Word{2, 1, 2}) == -2);
  CHECK(basis[1].expansion.at(Word{2, 2, 1}) == 1);

  auto deg2 = lyndon_basis(2, 2);
  REQUIRE(deg2.size() == 1);
  CHECK(deg2[0].bracketing == "[1,2]");
  CHECK(deg2[0].expansion.at(Word{1, 2}) == 1);
  CHECK(deg2[0].expansion.at(Word{2, 1}) == -1);
}

TEST_CASE("lie_project recovers bracket coordinates of Lie elements") {
  auto basis = lyndon_basis(2, 3);
  FreePoly<Rational> h(2, 3);
  // 3*[1,[1,2]] - 1/2*[[1,2],2]
  for (std::size_t i = 0; i < h.coeffs.size(); ++i)
    h.coeffs[i] = 3 * basis[0].expansion.coeffs[i] - basis[1].expansion.coeffs[i] / 2;
  auto proj = lie_project(h, basis);
  REQUIRE(proj.coeffs.size() == 2);
  CHECK(proj.coeffs[0] == Rational(3));
  CHECK(proj.coeffs[1] == Rational(-1, 2));
  CHECK(proj.residual == 0.0L);
}

TEST_CASE("lie_project flags non-Lie input by a nonzero residual") {
  FreePoly<Rational> h(2, 3);
  h.at(Word{1, 1, 2}) = 1;  // a bare word is not a Lie element
  auto proj = lie_project(h, lyndon_basis(2, 3));
  CHECK(proj.residual > 0.1L);
}

TEST_CASE("lie_project rejects inhomogeneous input") {
  FreePoly<Rational> h(2, 3);
  h.at(Word{1, 2}) = 1;
  h.at(Word{1, 1, 2}) = 1;
  CHECK_THROWS_AS(lie_project(h, lyndon_basis(2, 3)), ValidationError);
}

}  // TEST_SUITE
