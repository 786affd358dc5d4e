#include <cmath>
#include <numbers>
#include <random>

#include "bsl/exponents.hpp"
#include "bsl/sphere_ode.hpp"
#include "bsl/transforms.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace bsl;
using namespace bsl::transforms;

namespace {

double dipole(std::span<const double> x) {
  double n2 = 0;
  for (double v : x) n2 += v * v;
  return 2.0 * x.back() / n2;
}

double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Box ball_box(int N) {
  Box b;
  b.lo.assign(N, -0.15);
  b.hi.assign(N, 0.15);
  b.lo.back() = -0.65;
  b.hi.back() = -0.35;
  b.per_dim = N == 2 ? 4 : 3;
  return b;
}

Point random_tube_point(const BoundaryChart& c, std::mt19937_64& rng, double frac = 0.9) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Point xp(c.N - 1);
  for (double& v : xp) v = c.patch_radius * u(rng);
  const Point xi = c.boundary_point(xp), nu = c.outward_normal(xp);
  const double s = frac * c.tube_width * u(rng);
  Point x(c.N);
  for (int i = 0; i < c.N; ++i) x[i] = xi[i] - s * nu[i];
  return x;
}

Eigen::VectorXd plain_flux(const Eigen::VectorXd& eta, double p) { return std::pow(eta.norm(), p - 2.0) * eta; }

}  // namespace

TEST_CASE("inversion") {
  const auto I = InversionSpec::omega(2);
  const Point y = invert(I, Point{0.0, 1.0});
  CHECK(y[0] == 0.0);
  CHECK(y[1] == doctest::Approx(-0.5));
  const Point on_sphere{std::sin(0.7), -1.0 + std::cos(0.7)};
  CHECK(max_diff(invert(I, on_sphere), on_sphere) <= 1e-15);
  CHECK_THROWS_AS(invert(I, Point{0.0, -1.0}), Error);

  // the boundary plane goes to the sphere |x|^2 + x_N = 0
  for (int N : {2, 3}) {
    const auto J = InversionSpec::omega(N);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int n = 0; n < 20; ++n) {
      Point x(N, 0.0);
      for (int i = 0; i + 1 < N; ++i) x[i] = u(rng);
      const Point z = invert(J, x);
      double s = z.back();
      for (double v : z) s += v * v;
      CHECK(std::abs(s) <= 1e-12);
    }
  }
}

TEST_CASE("inversion is an involution") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  InversionSpec spec{{0.3, -1.0, 0.2}, 1.0};
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    Point x{u(rng), u(rng), u(rng)};
    worst = std::max(worst, max_diff(invert(spec, invert(spec, x)), x) / (1.0 + std::abs(x[0]) + std::abs(x[1]) + std::abs(x[2])));
  }
  CHECK(worst <= 1e-10);
  spec.power = 2.5;
  Point x{0.1, 0.2, 0.3};
  CHECK(max_diff(invert(spec, invert(spec, x)), x) <= 1e-14);
}

TEST_CASE("conformal residual") {
  for (int N : {2, 3}) {
    const auto I = InversionSpec::omega(N);
    const auto rep = conformal_residual(I, dipole, ball_box(N), 0.02);
    CHECK_MESSAGE(rep.order >= 1.8, "N = " << N << " order " << rep.order);
    CHECK(rep.err_half < rep.err_h);

    // negative control: |x|^2 is not N-harmonic, its residual converges to a nonzero value
    const auto bad = conformal_residual(
        I, [](std::span<const double> x) { return x[0] * x[0] + x.back() * x.back(); }, ball_box(N), 0.02);
    CHECK(bad.order < 0.5);
    CHECK(bad.err_half > 1e-2);
  }
  const auto c = conformal_residual(InversionSpec::omega(2), [](std::span<const double>) { return 3.0; }, ball_box(2), 0.02);
  CHECK(c.exact);
  CHECK(c.err_h == 0.0);

  Box bad = ball_box(2);
  bad.lo.back() = -1.2;
  CHECK_THROWS_AS(conformal_residual(InversionSpec::omega(2), dipole, bad, 0.02), Error);
}

TEST_CASE("inverted separable solution solves the weighted equation") {
  const auto pp = ProblemParams::n_laplacian(2, 2.0);
  const auto prof = sphere::solve_profile(pp, sphere::SphericalGrid(4001));
  const sphere::ProfileCurve omega(prof);
  const double beta = exponents::beta_q(pp);
  fd::Field u = [&](std::span<const double> y) {
    const double r = std::hypot(y[0], y[1]);
    return std::pow(r, -beta) * omega(std::acos(y[1] / r));
  };
  const auto I = InversionSpec::omega(2);
  const auto rep = weighted_equation_check(I, u, pp, ball_box(2), 0.02);
  CHECK_MESSAGE(rep.order >= 1.5, "order " << rep.order);

  const auto control = weighted_equation_check(I, u, pp, ball_box(2), 0.02, true);
  CHECK(control.order < 0.5);
  CHECK(control.err_half > 100.0 * rep.err_half);

  const auto zero = weighted_equation_check(I, [](std::span<const double>) { return 0.0; }, pp, ball_box(2), 0.02);
  CHECK(zero.exact);
}

TEST_CASE("charts") {
  const auto c = BoundaryChart::parabolic(3, 2.0);
  CHECK(c.h(Point{0.5, 0.5}) == doctest::Approx(0.5));
  const Point nu = c.outward_normal(Point{0.0, 0.0});
  CHECK(nu[2] == doctest::Approx(-1.0));
  const auto s = c.scaled(0.1);
  CHECK(s.h(Point{1.0, 0.0}) == doctest::Approx(0.1));

  BoundaryChart bad = BoundaryChart::flat(2);
  bad.terms.push_back({1.0, {1}});
  CHECK_THROWS_AS(bad.validate(), Error);
  bad.terms = {{1.0, {5}}};
  CHECK_THROWS_AS(bad.validate(), Error);

  BoundaryChart quartic = BoundaryChart::flat(3, 0.05);
  quartic.terms = {{0.3, {2, 0}}, {-0.2, {1, 1}}, {0.7, {0, 4}}};
  const auto back = chart_from_json(chart_to_json(quartic));
  CHECK(back.N == 3);
  CHECK(back.terms.size() == 3);
  CHECK(back.tube_width == 0.05);
  CHECK(back.h(Point{0.3, -0.4}) == quartic.h(Point{0.3, -0.4}));
  CHECK(chart_from_json(R"({"N": 2, "flat": true})").terms.empty());
  CHECK_THROWS_AS(chart_from_json("{"), Error);
  CHECK_THROWS_AS(chart_from_json(R"({"terms": []})"), Error);
}

TEST_CASE("reflection") {
  SUBCASE("flat mirror") {
    const auto c = BoundaryChart::flat(3);
    const Point r = reflect(c, Point{0.2, -0.3, 0.05});
    CHECK(max_diff(r, Point{0.2, -0.3, -0.05}) == 0.0);
  }
  SUBCASE("parabolic boundary points are fixed") {
    const auto c = BoundaryChart::parabolic(2, 1.0);
    for (double s : {-0.4, 0.0, 0.1, 0.45}) {
      const Point xi = c.boundary_point(Point{s});
      CHECK(max_diff(reflect(c, xi), xi) <= 1e-12);
    }
  }
  SUBCASE("parabolic reflection is tangent to the flat mirror") {
    // near the vertex psi(0, d) = (0, -d + d^2) since the curvature at 0 is 1
    const auto c = BoundaryChart::parabolic(2, 1.0);
    for (double d : {1e-2, 1e-3}) {
      const Point r = reflect(c, Point{0.0, d});
      CHECK(r[0] == 0.0);
      CHECK(std::abs(r[1] + d) <= 2.0 * d * d);
    }
  }
  SUBCASE("involution on random tube samples") {
    for (int N : {2, 3}) {
      BoundaryChart c = BoundaryChart::parabolic(N, 1.0, 0.2);
      if (N == 3) c.terms.push_back({0.3, {3, 1}});
      std::mt19937_64 rng(7);
      double worst = 0.0, swap = 1.0;
      for (int n = 0; n < 1000; ++n) {
        const Point x = random_tube_point(c, rng);
        const Point y = reflect(c, x);
        worst = std::max(worst, max_diff(reflect(c, y), x));
        swap = std::min(swap, project(c, x).signed_distance * project(c, y).signed_distance <= 0.0 ? 1.0 : 0.0);
      }
      CHECK_MESSAGE(worst <= 1e-10, "N = " << N);
      CHECK(swap == 1.0);
    }
  }
  const auto c = BoundaryChart::parabolic(2, 1.0, 0.05);
  CHECK_THROWS_AS(reflect(c, Point{0.0, 0.3}), Error);
}

TEST_CASE("reflection jacobian") {
  const auto c = BoundaryChart::parabolic(3, 1.5, 0.2);
  std::mt19937_64 rng(9);
  for (int n = 0; n < 20; ++n) {
    const Point x = random_tube_point(c, rng, 0.5);
    const Eigen::MatrixXd J = reflect_jacobian(c, x);
    for (int k = 0; k < 3; ++k) {
      Point a = x, b = x;
      a[k] += 1e-6;
      b[k] -= 1e-6;
      const Point ra = reflect(c, a), rb = reflect(c, b);
      for (int i = 0; i < 3; ++i) CHECK(J(i, k) == doctest::Approx((ra[i] - rb[i]) / 2e-6).epsilon(1e-6));
    }
    // involution: D psi(psi(x)) D psi(x) = I
    const Eigen::MatrixXd J2 = reflect_jacobian(c, reflect(c, x));
    CHECK((J2 * J - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("odd extension") {
  SUBCASE("flat chart") {
    const auto c = BoundaryChart::flat(2, 0.2);
    const auto v = extend_odd(c, [](std::span<const double> x) { return x[1] * std::exp(x[0]); });
    CHECK(v(Point{0.3, -0.1}) == doctest::Approx(-0.1 * std::exp(0.3)));
    const auto d = extend_odd(c, dipole);
    for (double x2 : {-0.15, -0.05, 0.05})
      CHECK(d(Point{0.2, x2}) == doctest::Approx(dipole(Point{0.2, x2})).epsilon(1e-14));
  }
  SUBCASE("curved chart is continuous") {
    const auto c = BoundaryChart::parabolic(2, 1.0, 0.1);
    fd::Field v = [&](std::span<const double> x) { return (x[1] - c.h(x.first(1))) * (2.0 + x[0]); };
    const auto ext = extend_odd(c, v);
    for (double s : {-0.3, 0.0, 0.2}) {
      const Point xi = c.boundary_point(Point{s}), nu = c.outward_normal(Point{s});
      const double d = 1e-9;
      const double in = ext(Point{xi[0] - d * nu[0], xi[1] - d * nu[1]});
      const double out = ext(Point{xi[0] + d * nu[0], xi[1] + d * nu[1]});
      CHECK(std::abs(in - out) <= 1e-8);
    }
  }
  CHECK_THROWS_AS(extend_odd(BoundaryChart::flat(2), [](std::span<const double>) { return 1.0; }), Error);
}

TEST_CASE("extended operator") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  for (double p : {1.5, 3.0}) {
    SUBCASE("flat chart is the plain flux") {
      const auto c = BoundaryChart::flat(3);
      for (int n = 0; n < 50; ++n) {
        const Point x = random_tube_point(c, rng);
        Eigen::VectorXd eta(3);
        eta << g(rng), g(rng), g(rng);
        CHECK((extended_operator(c, p, x, eta) - plain_flux(eta, p)).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
    SUBCASE("boundary points give the plain flux") {
      const auto c = BoundaryChart::parabolic(3, 2.0);
      for (double s : {-0.3, 0.1}) {
        const Point xi = c.boundary_point(Point{s, 0.5 * s});
        Eigen::VectorXd eta(3);
        eta << g(rng), g(rng), g(rng);
        CHECK((extended_operator(c, p, xi, eta) - plain_flux(eta, p)).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + plain_flux(eta, p).norm()));
      }
    }
    SUBCASE("zero and homogeneity") {
      const auto c = BoundaryChart::parabolic(2, 1.0);
      const Point x{0.2, c.h(Point{0.2}) - 0.05};
      CHECK(extended_operator(c, p, x, Eigen::VectorXd::Zero(2)).norm() == 0.0);
      Eigen::VectorXd eta(2);
      eta << 0.7, -1.3;
      const Eigen::VectorXd a = extended_operator(c, p, x, eta);
      CHECK((a - plain_flux(eta, p)).norm() > 1e-3);  // curvature is visible
      for (double cst : {-2.0, 0.5, 3.0}) {
        const Eigen::VectorXd b = extended_operator(c, p, x, cst * eta);
        CHECK((b - cst * std::pow(std::abs(cst), p - 2.0) * a).norm() <= 1e-12 * b.norm());
      }
    }
  }
  SUBCASE("eigenvector identity") {
    const auto c = BoundaryChart::parabolic(2, 1.0);
    const Point x{0.1, c.h(Point{0.1}) - 0.08};
    const double p = 3.0;
    const Eigen::MatrixXd J = reflect_jacobian(c, x);
    const Eigen::MatrixXd K = J.inverse().transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K.transpose() * K);
    const double b = std::abs(J.determinant());
    for (int e = 0; e < 2; ++e) {
      const Eigen::VectorXd eta = 1.7 * es.eigenvectors().col(e);
      const double mu = es.eigenvalues()[e];
      const Eigen::VectorXd expect = b * std::pow(mu, (p - 2.0) / 2.0) * std::pow(1.7, p - 2.0) * mu * eta;
      CHECK((extended_operator(c, p, x, eta) - expect).norm() <= 1e-12 * expect.norm());
    }
  }
  SUBCASE("derivative matches finite differences") {
    const auto c = BoundaryChart::parabolic(3, 1.0, 0.2);
    const Point x{0.1, -0.2, c.h(Point{0.1, -0.2}) - 0.1};
    Eigen::VectorXd eta(3);
    eta << 0.4, -0.9, 1.1;
    const Eigen::MatrixXd D = extended_operator_derivative(c, 3.0, x, eta);
    for (int i = 0; i < 3; ++i) {
      Eigen::VectorXd e1 = eta, e2 = eta;
      e1[i] += 1e-6;
      e2[i] -= 1e-6;
      const Eigen::VectorXd col = (extended_operator(c, 3.0, x, e1) - extended_operator(c, 3.0, x, e2)) / 2e-6;
      CHECK((D.col(i) - col).cwiseAbs().maxCoeff() <= 1e-6);
    }
  }
}

TEST_CASE("flat limit of the extended operator") {
  const auto c = BoundaryChart::parabolic(2, 1.0, 0.1);
  const Point x{0.3, c.h(Point{0.3}) - 0.09};
  Eigen::VectorXd eta(2);
  eta << -0.5, 1.2;
  double prev = INFINITY;
  for (double r : {1.0, 0.1, 0.01, 0.001}) {
    const auto cr = c.scaled(r);
    const Point xr{x[0], cr.h(Point{x[0]}) - 0.09};
    const double dev = (extended_operator(cr, 3.0, xr, eta) - plain_flux(eta, 3.0)).norm();
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev <= 1e-3);
}

TEST_CASE("ellipticity scan") {
  SUBCASE("flat chart") {
    for (double p : {1.5, 3.0}) {
      const auto rep = ellipticity_scan(BoundaryChart::flat(3), p, 200);
      CHECK(rep.gamma == doctest::Approx(std::min(1.0, p - 1.0)).epsilon(1e-10));
      CHECK(rep.gamma_ellip == rep.gamma);
      CHECK(rep.Gamma >= std::max(1.0, p - 1.0));
      CHECK(rep.Gamma <= 3.0 * std::max(1.0, p - 1.0) * 3.0);
      CHECK(rep.b_min == doctest::Approx(1.0));
      CHECK(rep.halvings == 0);
    }
  }
  SUBCASE("parabolic chart") {
    const auto c = BoundaryChart::parabolic(2, 1.0, 0.1);
    const auto rep = ellipticity_scan(c, 3.0, 300);
    CHECK(rep.gamma > 0.0);
    CHECK(rep.gamma <= rep.Gamma);
    CHECK(rep.halvings == 0);
    // convex side: the weight shrinks like (1 - s)/(1 + s) while dA/deta keeps eigenvalue 1
    CHECK(rep.gamma_ellip == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.b_min < 1.0);
    CHECK(rep.gamma == rep.b_min);
    CHECK(rep.b_min >= rep.gamma);
    CHECK(rep.b_max <= rep.Gamma);
    CHECK(std::isfinite(rep.Gamma));
    const auto j = nlohmann::json::parse(ellipticity_json(rep, c, 3.0));
    CHECK(j["gamma"] == rep.gamma);
  }
  SUBCASE("too wide a tube is halved") {
    // curvature radius 1/4 at the vertex: a tube of width 1 cannot project uniquely
    const auto c = BoundaryChart::parabolic(2, 4.0, 1.0);
    const auto rep = ellipticity_scan(c, 3.0, 300);
    CHECK(rep.halvings >= 1);
    CHECK(rep.width <= 0.25);
  }
  SUBCASE("failure") {
    CHECK_THROWS_AS(ellipticity_scan(BoundaryChart::parabolic(2, 4.0, 1.0), 3.0, 300, 1, 0.9), Error);
  }
}
