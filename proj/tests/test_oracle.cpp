#include <cmath>
#include <vector>

#include "doctest.h"
#include "splitkit/analysis.hpp"
#include "splitkit/errors.hpp"
#include "splitkit/integrator.hpp"
#include "splitkit/oracle.hpp"

using namespace splitkit;

namespace {

SchemeTable half_half_strang() {
  SchemeTable s;
  s.name = "strang-2-halved";
  s.n_ops = 2;
  s.stages = 3;
  s.order = 2;
  s.coeffs = {{Rational(1, 4), Rational(1, 2), Rational(1, 4)},
              {Rational(1, 2), Rational(1, 2), Rational(0)}};
  return s;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("SplitMix64 streams are deterministic and bounded") {
  SplitMix64 a(42), b(42), c(43);
  bool all_equal = true, any_diff = false;
  double mean = 0;
  for (int i = 0; i < 4096; ++i) {
    double xa = a.uniform_pm1();
    double xb = b.uniform_pm1();
    double xc = c.uniform_pm1();
    all_equal = all_equal && xa == xb;
    any_diff = any_diff || xa != xc;
    CHECK(xa >= -1.0);
    CHECK(xa < 1.0);
    mean += xa;
  }
  CHECK(all_equal);
  CHECK(any_diff);
  CHECK(std::fabs(mean / 4096.0) < 0.05);
}

TEST_CASE("make_problem: normalized, non-commuting, deterministic") {
  MatrixProblem p = make_problem(3, 6, 7);
  REQUIRE(p.mats.size() == 3);
  for (const auto& m : p.mats) CHECK(static_cast<double>(m.norm()) == doctest::Approx(1.0).epsilon(1e-15));
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      MatrixXld comm = p.mats[i] * p.mats[j] - p.mats[j] * p.mats[i];
      CHECK(static_cast<double>(comm.norm()) > 0.01);
    }
  MatrixProblem q = make_problem(3, 6, 7);
  for (int l = 0; l < 3; ++l) CHECK(static_cast<double>((p.mats[l] - q.mats[l]).norm()) == 0.0);
  CHECK_THROWS_AS(make_problem(2, 2, 1), ValidationError);
}

TEST_CASE("expm on closed-form cases") {
  MatrixXld nil(2, 2);
  nil << 0.0L, 1.0L, 0.0L, 0.0L;
  MatrixXld e = expm(nil);
  CHECK(static_cast<double>(e(0, 0)) == 1.0);
  CHECK(static_cast<double>(e(0, 1)) == doctest::Approx(1.0).epsilon(1e-18));
  CHECK(static_cast<double>(e(1, 0)) == 0.0);

  long double th = 0.7L;
  MatrixXld rot(2, 2);
  rot << 0.0L, -th, th, 0.0L;
  MatrixXld r = expm(rot);
  CHECK(static_cast<double>(r(0, 0)) == doctest::Approx(std::cos(0.7)).epsilon(1e-15));
  CHECK(static_cast<double>(r(1, 0)) == doctest::Approx(std::sin(0.7)).epsilon(1e-15));

  MatrixProblem p = make_problem(2, 5, 11);
  MatrixXld prod = expm(p.mats[0]) * expm(-p.mats[0]);
  CHECK(static_cast<double>((prod - MatrixXld::Identity(5, 5)).norm()) < 1e-17);
}

TEST_CASE("exact_step has the semigroup property") {
  MatrixProblem p = make_problem(2, 6, 5);
  VectorXld u = seeded_unit_state(6, 5);
  VectorXld once = exact_step(p, 0.3L, u);
  VectorXld twice = exact_step(p, 0.1L, exact_step(p, 0.2L, u));
  CHECK(static_cast<double>((once - twice).norm()) < 1e-12);
  CHECK_THROWS_AS(exact_step(p, -0.1L, u), ValidationError);
}

TEST_CASE("seeded_unit_state is a deterministic unit vector") {
  VectorXld u = seeded_unit_state(8, 3);
  CHECK(static_cast<double>(u.norm()) == doctest::Approx(1.0).epsilon(1e-18));
  CHECK(static_cast<double>((u - seeded_unit_state(8, 3)).norm()) == 0.0);
  CHECK(static_cast<double>((u - seeded_unit_state(8, 4)).norm()) > 0.0);
}

TEST_CASE("default_h_list is 2^-4 .. 2^-10") {
  auto hs = default_h_list();
  REQUIRE(hs.size() == 7);
  CHECK(hs.front() == 0.0625L);
  CHECK(hs.back() == 0.0009765625L);
}

TEST_CASE("empirical local-order slopes match order + 1") {
  MatrixProblem p2 = make_problem(2, 6, 1);
  OrderFit strang = empirical_order(registry_scheme("strang-2"), p2, default_h_list());
  CHECK(static_cast<double>(strang.slope) == doctest::Approx(3.0).epsilon(0.04));
  CHECK(strang.errors.size() == 7);

  OrderFit lt = empirical_order(registry_scheme("lie-trotter-2"), p2, default_h_list());
  CHECK(static_cast<double>(lt.slope) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("empirical_order validates its inputs") {
  MatrixProblem p = make_problem(2, 6, 1);
  SchemeTable s = registry_scheme("strang-2");
  CHECK_THROWS_AS(empirical_order(s, p, {0.1L, 0.05L, 0.025L}), ValidationError);
  CHECK_THROWS_AS(empirical_order(s, p, {0.1L, 0.05L, 0.03L, 0.01L}), ValidationError);
  CHECK_THROWS_AS(empirical_order(registry_scheme("strang-4"), p, default_h_list()),
                  ValidationError);
}

TEST_CASE("errors at the roundoff floor are flagged as non-monotone") {
  MatrixProblem p = make_problem(2, 6, 1);
  std::vector<long double> hs;
  for (int k = 4; k <= 40; ++k) hs.push_back(std::ldexp(1.0L, -k));
  CHECK_THROWS_AS(empirical_order(registry_scheme("strang-2"), p, hs), OracleError);
}

TEST_CASE("empirical gamma matches the exact ratio of the halved pair") {
  MilnePair pair{registry_scheme("strang-2"), half_half_strang(), Rational(1, 4)};
  MatrixProblem p = make_problem(2, 6, 9);
  long double g = empirical_gamma(pair, p, default_h_list());
  CHECK(static_cast<double>(g) == doctest::Approx(0.25).epsilon(1e-3));
}

}  // TEST_SUITE
