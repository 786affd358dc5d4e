#include <cmath>
#include <random>

#include "bsl/exponents.hpp"
#include "doctest.h"

using namespace bsl;
namespace ex = bsl::exponents;

TEST_CASE("beta_q values") {
  CHECK(ex::beta_q(3, 3.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(ex::beta_q(2, 3.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ex::beta_q(2, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(ex::beta_q(2, 1.0), Error);
  CHECK_THROWS_AS(ex::beta_q(3, 1.5), Error);
}

TEST_CASE("critical exponent") {
  CHECK(ex::critical_q(2) == 3.0);
  CHECK(ex::critical_q(3) == 5.0);
  CHECK(ex::critical_q(10) == 19.0);
  CHECK_THROWS_AS(ex::critical_q(1), Error);
}

TEST_CASE("beta_q decreasing with beta_q(q_c) = 1") {
  for (int N = 2; N <= 5; ++N) {
    double prev = INFINITY;
    for (int i = 1; i <= 100; ++i) {
      const double q = (N - 1.0) + N * i / 100.0;  // ends at q_c
      const double b = ex::beta_q(N, q);
      CHECK(b < prev);
      prev = b;
      if (q < ex::critical_q(N)) CHECK(b > 1.0);
    }
    CHECK(std::abs(ex::beta_q(N, ex::critical_q(N)) - 1.0) <= 1e-12);
  }
}

TEST_CASE("constant solution") {
  CHECK(ex::const_solution(2, 2.0) == doctest::Approx(4.0).epsilon(1e-14));
  // (2 * 3^3)^1 = 54; the residual oracle below confirms it.
  CHECK(ex::const_solution(3, 3.0) == doctest::Approx(54.0).epsilon(1e-14));
  CHECK(ex::const_solution(2, 2.5) == doctest::Approx(std::pow(16.0 / 9.0, 1.0 / 1.5)).epsilon(1e-14));
  CHECK(ex::const_solution(2, 2.5) == doctest::Approx(1.46752).epsilon(1e-5));

  std::mt19937 rng(7);
  for (int N = 2; N <= 6; ++N) {
    std::uniform_real_distribution<double> uq(N - 1.0 + 0.05, 2.0 * N - 1.0 + 2.0);
    for (int i = 0; i < 20; ++i) {
      const double q = uq(rng);
      const double c = ex::const_solution(N, q);
      const double b = ex::beta_q(N, q);
      // c^{q+1-N} = Lambda beta^{N-2}
      CHECK(std::pow(c, q + 1.0 - N) == doctest::Approx(ex::lambda_sep(N, q) * std::pow(b, N - 2)).epsilon(1e-12));
      CHECK(std::abs(ex::constant_residual(N, q, c)) <= 1e-10 * std::pow(c, q));
    }
  }
}

TEST_CASE("scaling exponent") {
  CHECK(ex::scaling_exponent(2, 2.0) == doctest::Approx(1.0));
  CHECK(ex::scaling_exponent(3, 4.0) == doctest::Approx(0.5));
  CHECK(ex::scaling_exponent(2, 3.0 - 1e-9) == doctest::Approx(0.0).epsilon(1e-8));
  CHECK_THROWS_AS(ex::scaling_exponent(2, 3.0), Error);
  CHECK_THROWS_AS(ex::scaling_exponent(2, 0.5), Error);
}

TEST_CASE("kv_root") {
  CHECK(std::abs(ex::kv_root(2.0) - 1.0) <= 1e-14);
  CHECK(ex::kv_root(3.0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(ex::kv_root(1e12) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  for (double p : {1.1, 1.5, 2.5, 4.0, 10.0}) {
    const double b = ex::kv_root(p);
    CHECK(b > 0.0);
    const double c = (p - 3) / (p - 1);
    CHECK(std::abs(3 * b * b + 2 * c * b - 1) <= 1e-14 * (3 * b * b + 2 * std::abs(c) * b + 1));
  }
  CHECK_THROWS_AS(ex::kv_root(1.0), Error);
}

TEST_CASE("beta2 sign-changing exponent") {
  CHECK(ex::beta2_sign_changing(2) == doctest::Approx((13.0 + std::sqrt(40.0)) / 6.0).epsilon(1e-14));
  CHECK(ex::beta2_sign_changing(2) == doctest::Approx(3.220759).epsilon(1e-6));
  CHECK(ex::beta2_sign_changing(3) == doctest::Approx((20.0 + std::sqrt(57.0)) / 12.0).epsilon(1e-14));
  CHECK(ex::beta2_sign_changing(3) == doctest::Approx(2.295820).epsilon(1e-6));
  for (int N = 2; N < 30; ++N) CHECK(ex::beta2_sign_changing(N) > 0.0);
}

TEST_CASE("lambda_pq") {
  CHECK(ex::lambda_pq(2.0, 2.0, 2) == doctest::Approx(4.0));
  CHECK(ex::lambda_pq(3.0, 3.0, 3) == doctest::Approx(18.0));
  // p = 2, N = 3, q = 3: beta = 1 and the linear coefficient beta(beta + 2 - N) is 0
  CHECK(std::abs(ex::lambda_pq(2.0, 3.0, 3)) <= 1e-15);
  CHECK(ex::lambda_pq(2.0, 2.0, 3) == doctest::Approx(2.0));
  CHECK_THROWS_AS(ex::lambda_pq(2.0, 1.0, 3), Error);

  std::mt19937 rng(11);
  for (int i = 0; i < 50; ++i) {
    const int N = 2 + i % 5;
    std::uniform_real_distribution<double> uq(N - 1.0 + 0.05, 2.0 * N - 1.0);
    const double q = uq(rng);
    CHECK(std::abs(ex::lambda_pq(N, q, N) - ex::lambda_sep(N, q)) <= 1e-12 * ex::lambda_sep(N, q));
    const double b = ex::beta_pq(N, q);
    CHECK(ex::lambda_spectral(b, N, N) == doctest::Approx(ex::lambda_pq(N, q, N)).epsilon(1e-12));
  }
}

TEST_CASE("lambda_pq: constant-solution oracle for general p") {
  // With u = r^{-beta} c, -Delta_p u + u^q = 0 reduces to
  // Lambda(p,q) beta^{p-2} c^{p-1} = c^q, i.e. the separable coefficient must make
  // a constant balance the absorption.  Check against a radial finite difference.
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    for (int N : {2, 3, 4}) {
      const double q = p - 1.0 + 0.7;
      const double b = ex::beta_pq(p, q);
      const double lam = ex::lambda_pq(p, q, N);
      // radial p-Laplacian of r^{-b} at r = 1: r^{1-N}(r^{N-1}|u'|^{p-2}u')'
      auto flux = [&](double r) {
        const double du = -b * std::pow(r, -b - 1.0);
        return std::pow(r, N - 1.0) * std::pow(std::abs(du), p - 2.0) * du;
      };
      const double h = 1e-5;
      const double lap = (flux(1 + h) - flux(1 - h)) / (2 * h);
      // -Delta_p(r^{-b}) at r = 1 should equal -lam * b^{p-2}
      CHECK(-lap == doctest::Approx(-lam * std::pow(b, p - 2.0)).epsilon(1e-6));
    }
  }
}

TEST_CASE("exponent table") {
  auto t = ex::exponent_table(ProblemParams::n_laplacian(2, 2.0));
  CHECK(t.beta_q == doctest::Approx(2.0));
  CHECK(t.q_c == 3.0);
  CHECK(t.lambda_sep == doctest::Approx(4.0));
  CHECK(t.const_solution == doctest::Approx(4.0));
  REQUIRE(t.scaling_exp);
  CHECK(*t.scaling_exp == doctest::Approx(1.0));
  CHECK_FALSE(t.critical);

  auto c = ex::exponent_table(ProblemParams::n_laplacian(2, 3.0));
  CHECK(c.critical);
  CHECK(c.beta_q == doctest::Approx(1.0));
  CHECK_FALSE(c.scaling_exp);

  CHECK_THROWS_AS(ex::exponent_table(ProblemParams::n_laplacian(3, 2.0)), Error);
}

TEST_CASE("strength marker") {
  CHECK(Strength::infinite().is_infinite());
  CHECK_THROWS_AS(Strength::infinite().value(), Error);
  CHECK(Strength::finite(2.5).value() == 2.5);
  CHECK_THROWS_AS(Strength::finite(-1.0), Error);
  CHECK_THROWS_AS(Strength::finite(INFINITY), Error);
  CHECK(Strength::infinite().str() == "inf");
}
