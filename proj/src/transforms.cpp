#include "bsl/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <sstream>

#include "bsl/errors.hpp"
#include "json.hpp"

namespace bsl::transforms {

namespace {

using cplx = std::complex<double>;

double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

template <class T>
T ipow(T x, int n) {
  T y(1.0);
  for (int i = 0; i < n; ++i) y *= x;
  return y;
}

template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

/// h, Dh and D^2 h at y'.
template <class T>
void chart_eval(const BoundaryChart& c, const Vec<T>& y, T& h, Vec<T>& g, Mat<T>& H) {
  const int m = c.N - 1;
  h = T(0.0);
  g = Vec<T>::Zero(m);
  H = Mat<T>::Zero(m, m);
  for (const auto& t : c.terms) {
    std::vector<T> f(m);
    T prod(t.c);
    for (int i = 0; i < m; ++i) {
      f[i] = ipow(y[i], t.powers[i]);
      prod *= f[i];
    }
    h += prod;
    for (int i = 0; i < m; ++i) {
      if (t.powers[i] == 0) continue;
      T gi(t.c * t.powers[i]);
      for (int l = 0; l < m; ++l) gi *= l == i ? ipow(y[l], t.powers[l] - 1) : f[l];
      g[i] += gi;
      for (int j = 0; j < m; ++j) {
        const int pj = j == i ? t.powers[i] - 1 : t.powers[j];
        if (pj == 0) continue;
        T hij(t.c * t.powers[i] * pj);
        for (int l = 0; l < m; ++l) {
          if (l == i && l == j) hij *= ipow(y[l], t.powers[l] - 2);
          else if (l == i || l == j) hij *= ipow(y[l], t.powers[l] - 1);
          else hij *= f[l];
        }
        H(i, j) += hij;
      }
    }
  }
}

/// F(y') = (y' - x') + (h(y') - x_N) Dh(y') and its Jacobian.
template <class T>
void optimality(const BoundaryChart& c, const Vec<T>& x, const Vec<T>& y, Vec<T>& F, Mat<T>& JF) {
  const int m = c.N - 1;
  T h;
  Vec<T> g;
  Mat<T> H;
  chart_eval(c, y, h, g, H);
  F = y - x.head(m) + (h - x[m]) * g;
  JF = Mat<T>::Identity(m, m) + g * g.transpose() + (h - x[m]) * H;
}

Vec<double> as_vec(std::span<const double> x) { return Eigen::Map<const Vec<double>>(x.data(), x.size()); }

Point boundary_of(const BoundaryChart& c, const Vec<double>& y) {
  Point xi(y.data(), y.data() + y.size());
  xi.push_back(c.h(xi));
  return xi;
}

bool inside(const BoundaryChart& c, std::span<const double> x) { return x[c.N - 1] - c.h(x.first(c.N - 1)) > 0.0; }

OrderReport order_report(double h, double e1, double e2) {
  OrderReport rep{h, e1, e2, std::numeric_limits<double>::quiet_NaN(), e1 == 0.0 && e2 == 0.0};
  if (!rep.exact) rep.order = fd::observed_order(e1, e2);
  return rep;
}

void require_clear_of_center(const InversionSpec& spec, const Box& box, double h) {
  require(h > 0.0, ErrorCode::InvalidInput, "finite-difference step must be positive");
  require(box.lo.size() == spec.center.size() && box.hi.size() == spec.center.size(), ErrorCode::InvalidInput,
          "box dimension does not match the inversion center");
  double d2 = 0.0;
  for (std::size_t i = 0; i < box.lo.size(); ++i) {
    const double c = std::clamp(spec.center[i], box.lo[i], box.hi[i]);
    d2 += (c - spec.center[i]) * (c - spec.center[i]);
  }
  require(std::sqrt(d2) > 2.0 * h, ErrorCode::Domain, "sampling box touches the inversion center");
}

}  // namespace

InversionSpec InversionSpec::omega(int N) {
  InversionSpec s;
  s.center.assign(N, 0.0);
  s.center.back() = -1.0;
  return s;
}

Point invert(const InversionSpec& spec, std::span<const double> x) {
  require(spec.power > 0.0, ErrorCode::InvalidInput, "inversion power must be positive");
  require(x.size() == spec.center.size(), ErrorCode::InvalidInput, "dimension mismatch in invert");
  const double d2 = dist2(x, spec.center);
  require(d2 > 0.0, ErrorCode::Domain, "invert: point coincides with the center");
  Point y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = spec.center[i] + spec.power * (x[i] - spec.center[i]) / d2;
  return y;
}

std::vector<Point> Box::samples() const {
  require(lo.size() == hi.size() && !lo.empty() && per_dim >= 1, ErrorCode::InvalidInput, "invalid sampling box");
  const std::size_t n = lo.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= per_dim;
  std::vector<Point> out;
  out.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Point x(n);
    std::size_t rest = idx;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = (static_cast<double>(rest % per_dim) + 0.5) / per_dim;
      rest /= per_dim;
      x[i] = lo[i] + s * (hi[i] - lo[i]);
    }
    out.push_back(std::move(x));
  }
  return out;
}

OrderReport conformal_residual(const InversionSpec& spec, const fd::Field& v, const Box& box, double h) {
  require_clear_of_center(spec, box, h);
  const double p = static_cast<double>(spec.center.size());
  fd::Field w = [&](std::span<const double> x) { return v(invert(spec, x)); };
  double e[2] = {0.0, 0.0};
  for (const auto& x : box.samples())
    for (int lvl = 0; lvl < 2; ++lvl) e[lvl] = std::max(e[lvl], std::abs(fd::p_laplacian(w, x, p, lvl == 0 ? h : h / 2)));
  return order_report(h, e[0], e[1]);
}

OrderReport weighted_equation_check(const InversionSpec& spec, const fd::Field& u, const ProblemParams& params,
                                    const Box& box, double h, bool unit_weight) {
  require_clear_of_center(spec, box, h);
  const int N = static_cast<int>(spec.center.size());
  require(params.N == N && params.p == N, ErrorCode::InvalidInput, "weighted check needs p = N matching the box");
  fd::Field w = [&](std::span<const double> x) { return u(invert(spec, x)); };
  double e[2] = {0.0, 0.0};
  for (const auto& x : box.samples()) {
    const double weight = unit_weight ? 1.0 : std::pow(dist2(x, spec.center), -static_cast<double>(N));
    const double wx = w(x);
    const double absorption = params.A * weight * std::pow(std::abs(wx), params.q - 1.0) * wx;
    for (int lvl = 0; lvl < 2; ++lvl)
      e[lvl] = std::max(e[lvl], std::abs(-fd::p_laplacian(w, x, N, lvl == 0 ? h : h / 2) + absorption));
  }
  return order_report(h, e[0], e[1]);
}

BoundaryChart BoundaryChart::flat(int N, double tube_width) {
  BoundaryChart c;
  c.N = N;
  c.tube_width = tube_width;
  c.validate();
  return c;
}

BoundaryChart BoundaryChart::parabolic(int N, double a, double tube_width) {
  BoundaryChart c;
  c.N = N;
  c.tube_width = tube_width;
  for (int i = 0; i < N - 1; ++i) {
    Monomial t{0.5 * a, std::vector<int>(N - 1, 0)};
    t.powers[i] = 2;
    c.terms.push_back(t);
  }
  c.validate();
  return c;
}

BoundaryChart BoundaryChart::scaled(double r) const {
  require(r > 0.0, ErrorCode::InvalidInput, "chart scale must be positive");
  BoundaryChart c = *this;
  for (auto& t : c.terms) {
    int deg = 0;
    for (int e : t.powers) deg += e;
    t.c *= std::pow(r, deg - 1);
  }
  return c;
}

void BoundaryChart::validate() const {
  require(N >= 2, ErrorCode::InvalidInput, "chart dimension must be at least 2");
  require(tube_width > 0.0 && patch_radius > 0.0, ErrorCode::InvalidInput, "tube width and patch radius must be positive");
  for (const auto& t : terms) {
    require(static_cast<int>(t.powers.size()) == N - 1, ErrorCode::InvalidInput, "monomial has wrong number of exponents");
    int deg = 0;
    for (int e : t.powers) {
      require(e >= 0, ErrorCode::InvalidInput, "negative exponent in chart");
      deg += e;
    }
    require(deg >= 2 && deg <= 4, ErrorCode::InvalidInput, "chart monomials must have degree 2..4");
    require(std::isfinite(t.c), ErrorCode::InvalidInput, "non-finite chart coefficient");
  }
}

double BoundaryChart::h(std::span<const double> xp) const {
  double s = 0.0;
  for (const auto& t : terms) {
    double m = t.c;
    for (int i = 0; i < N - 1; ++i) m *= ipow(xp[i], t.powers[i]);
    s += m;
  }
  return s;
}

Point BoundaryChart::boundary_point(std::span<const double> xp) const {
  Point x(xp.begin(), xp.begin() + (N - 1));
  x.push_back(h(xp));
  return x;
}

Point BoundaryChart::outward_normal(std::span<const double> xp) const {
  double hv;
  Vec<double> g;
  Mat<double> H;
  chart_eval<double>(*this, Eigen::Map<const Vec<double>>(xp.data(), N - 1), hv, g, H);
  const double s = std::sqrt(1.0 + g.squaredNorm());
  Point nu(g.data(), g.data() + g.size());
  nu.push_back(-1.0);
  for (double& v : nu) v /= s;
  return nu;
}

std::string chart_to_json(const BoundaryChart& chart) {
  nlohmann::json j;
  j["N"] = chart.N;
  j["tube_width"] = chart.tube_width;
  j["patch_radius"] = chart.patch_radius;
  if (chart.terms.empty()) j["flat"] = true;
  j["terms"] = nlohmann::json::array();
  for (const auto& t : chart.terms) j["terms"].push_back({{"c", t.c}, {"powers", t.powers}});
  return j.dump(2);
}

BoundaryChart chart_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("chart JSON: ") + e.what());
  }
  try {
    BoundaryChart c;
    c.N = j.at("N").get<int>();
    c.tube_width = j.value("tube_width", c.tube_width);
    c.patch_radius = j.value("patch_radius", c.patch_radius);
    if (!j.value("flat", false))
      for (const auto& t : j.at("terms")) c.terms.push_back({t.at("c").get<double>(), t.at("powers").get<std::vector<int>>()});
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("chart JSON: ") + e.what());
  }
}

Projection project(const BoundaryChart& chart, std::span<const double> x) {
  const int m = chart.N - 1;
  require(static_cast<int>(x.size()) == chart.N, ErrorCode::InvalidInput, "point dimension does not match the chart");
  const Vec<double> xv = as_vec(x);
  Vec<double> y = xv.head(m), F;
  Mat<double> JF;
  optimality(chart, xv, y, F, JF);
  const double scale = 1.0 + xv.cwiseAbs().maxCoeff();
  Projection pr;
  for (pr.iters = 0; F.norm() > 1e-14 * scale; ++pr.iters) {
    if (pr.iters >= 100) fail(ErrorCode::ProjectionFailure, "projection Newton did not converge");
    Eigen::LDLT<Mat<double>> ldlt(JF);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) fail(ErrorCode::ProjectionFailure, "projection Hessian is not positive definite");
    const Vec<double> step = ldlt.solve(F);
    double lambda = 1.0;
    Vec<double> yn, Fn;
    Mat<double> Jn;
    for (;; lambda *= 0.5) {
      if (lambda < 1e-10) fail(ErrorCode::ProjectionFailure, "projection Newton stalled");
      yn = y - lambda * step;
      optimality(chart, xv, yn, Fn, Jn);
      if (Fn.norm() <= (1.0 - 1e-4 * lambda) * F.norm()) break;
    }
    y = yn;
    F = Fn;
    JF = Jn;
  }
  pr.xi = boundary_of(chart, y);
  const double d = std::sqrt(dist2(x, pr.xi));
  pr.signed_distance = inside(chart, x) ? d : -d;
  require(d <= chart.tube_width * (1.0 + 1e-12), ErrorCode::Domain, "point lies outside the reflection tube");
  return pr;
}

Point reflect(const BoundaryChart& chart, std::span<const double> x) {
  const auto pr = project(chart, x);
  Point out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = 2.0 * pr.xi[i] - x[i];
  return out;
}

Eigen::MatrixXd reflect_jacobian(const BoundaryChart& chart, std::span<const double> x) {
  const int N = chart.N, m = N - 1;
  const auto pr = project(chart, x);
  const Vec<cplx> y0 = Eigen::Map<const Vec<double>>(pr.xi.data(), m).cast<cplx>();
  const double step = 1e-30;
  Eigen::MatrixXd J(N, N);
  for (int k = 0; k < N; ++k) {
    Vec<cplx> xc = as_vec(x).cast<cplx>();
    xc[k] += cplx(0.0, step);
    // the real root is exact, so Newton in complex arithmetic only has to
    // resolve the linear imaginary perturbation
    Vec<cplx> y = y0, F;
    Mat<cplx> JF;
    for (int it = 0; it < 2; ++it) {
      optimality(chart, xc, y, F, JF);
      y -= JF.partialPivLu().solve(F);
    }
    cplx hy;
    Vec<cplx> g;
    Mat<cplx> H;
    chart_eval(chart, y, hy, g, H);
    for (int i = 0; i < N; ++i) {
      const cplx xi = i < m ? y[i] : hy;
      J(i, k) = (2.0 * xi - xc[i]).imag() / step;
    }
  }
  return J;
}

fd::Field extend_odd(const BoundaryChart& chart, fd::Field v, double trace_tol) {
  chart.validate();
  const int m = chart.N - 1;
  const int per = 8;  // even count keeps the sample lattice off x' = 0
  std::size_t total = 1;
  for (int i = 0; i < m; ++i) total *= per;
  for (std::size_t idx = 0; idx < total; ++idx) {
    Point xp(m);
    std::size_t rest = idx;
    for (int i = 0; i < m; ++i) {
      xp[i] = chart.patch_radius * (2.0 * ((rest % per) + 0.5) / per - 1.0);
      rest /= per;
    }
    const double tr = v(chart.boundary_point(xp));
    require(std::abs(tr) <= trace_tol, ErrorCode::InvalidInput, "field does not vanish on the boundary");
  }
  return [chart, v = std::move(v)](std::span<const double> x) {
    if (inside(chart, x)) return v(x);
    const Point y = reflect(chart, x);
    return -v(y);
  };
}

double extended_weight(const BoundaryChart& chart, std::span<const double> x) {
  if (inside(chart, x)) return 1.0;
  return std::abs(reflect_jacobian(chart, x).determinant());
}

namespace {

struct Outer {
  double b;
  Eigen::MatrixXd K;  // J^{-T}
};

Outer outer_factors(const BoundaryChart& chart, std::span<const double> x) {
  const Eigen::MatrixXd J = reflect_jacobian(chart, x);
  return {std::abs(J.determinant()), J.inverse().transpose()};
}

}  // namespace

Eigen::VectorXd extended_operator(const BoundaryChart& chart, double p, std::span<const double> x,
                                  const Eigen::VectorXd& eta) {
  require(p > 1.0, ErrorCode::InvalidInput, "p must exceed 1");
  require(eta.size() == chart.N, ErrorCode::InvalidInput, "eta has the wrong dimension");
  const double n = eta.norm();
  if (n == 0.0) return Eigen::VectorXd::Zero(chart.N);
  if (inside(chart, x)) return std::pow(n, p - 2.0) * eta;
  const auto [b, K] = outer_factors(chart, x);
  const Eigen::VectorXd g = K * eta;
  return b * std::pow(g.norm(), p - 2.0) * (K.transpose() * g);
}

Eigen::MatrixXd extended_operator_derivative(const BoundaryChart& chart, double p, std::span<const double> x,
                                             const Eigen::VectorXd& eta) {
  require(p > 1.0, ErrorCode::InvalidInput, "p must exceed 1");
  require(eta.size() == chart.N && eta.norm() > 0.0, ErrorCode::InvalidInput, "eta must be a nonzero vector of dimension N");
  double b = 1.0;
  Eigen::MatrixXd K = Eigen::MatrixXd::Identity(chart.N, chart.N);
  if (!inside(chart, x)) {
    auto o = outer_factors(chart, x);
    b = o.b;
    K = std::move(o.K);
  }
  const Eigen::VectorXd g = K * eta;
  const Eigen::VectorXd a = K.transpose() * g;
  const double gn = g.norm();
  return b * std::pow(gn, p - 2.0) * (K.transpose() * K + (p - 2.0) * a * a.transpose() / (gn * gn));
}

EllipticityReport ellipticity_scan(const BoundaryChart& chart, double p, int samples, std::uint64_t seed,
                                   double min_width) {
  chart.validate();
  require(p > 1.0, ErrorCode::InvalidInput, "p must exceed 1");
  require(samples >= 1, ErrorCode::InvalidInput, "need at least one sample");
  const int N = chart.N, m = N - 1;
  EllipticityReport rep;
  rep.samples = samples;
  for (double width = chart.tube_width; width >= min_width; width *= 0.5, ++rep.halvings) {
    BoundaryChart c = chart;
    c.tube_width = width;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::normal_distribution<double> gauss;
    double gamma = INFINITY, Gamma = 0.0, bmin = INFINITY, bmax = 0.0;
    bool ok = true;
    for (int n = 0; n < samples && ok; ++n) {
      Point xp(m);
      for (double& v : xp) v = c.patch_radius * unit(rng);
      const double s = width * unit(rng);
      const Point xi = c.boundary_point(xp), nu = c.outward_normal(xp);
      Point x(N);
      for (int i = 0; i < N; ++i) x[i] = xi[i] - s * nu[i];
      Eigen::VectorXd eta(N);
      for (int i = 0; i < N; ++i) eta[i] = gauss(rng);
      try {
        // the sampled foot point must be the nearest one, otherwise the tube is too wide
        const auto pr = project(c, x);
        if (dist2(pr.xi, xi) > 1e-16 * (1.0 + dist2(xi, Point(N, 0.0)))) {
          ok = false;
          break;
        }
        const Eigen::MatrixXd D = extended_operator_derivative(c, p, x, eta);
        const double scale = std::pow(eta.norm(), p - 2.0);
        const Eigen::MatrixXd Ds = 0.5 * (D + D.transpose());
        gamma = std::min(gamma, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Ds).eigenvalues().minCoeff() / scale);
        Gamma = std::max(Gamma, D.cwiseAbs().sum() / scale);
        const double b = extended_weight(c, x);
        bmin = std::min(bmin, b);
        bmax = std::max(bmax, b);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ProjectionFailure && e.code() != ErrorCode::Domain) throw;
        ok = false;
      }
    }
    // on the convex side b drops below 1 while the ellipticity constant stays
    // at 1, so the lower constant has to cover both
    const double lower = std::min(gamma, bmin), upper = std::max(Gamma, bmax);
    if (ok && lower > 0.0 && lower <= upper && std::isfinite(upper)) {
      rep.width = width;
      rep.gamma_ellip = gamma;
      rep.Gamma_norm = Gamma;
      rep.b_min = bmin;
      rep.b_max = bmax;
      rep.gamma = lower;
      rep.Gamma = upper;
      return rep;
    }
  }
  fail(ErrorCode::EllipticityFailure, "no tube width satisfies the ellipticity bounds");
}

std::string ellipticity_json(const EllipticityReport& report, const BoundaryChart& chart, double p) {
  nlohmann::json j;
  j["chart"] = nlohmann::json::parse(chart_to_json(chart));
  j["p"] = p;
  j["width"] = report.width;
  j["gamma"] = report.gamma;
  j["Gamma"] = report.Gamma;
  j["gamma_ellip"] = report.gamma_ellip;
  j["Gamma_norm"] = report.Gamma_norm;
  j["b_min"] = report.b_min;
  j["b_max"] = report.b_max;
  j["halvings"] = report.halvings;
  j["samples"] = report.samples;
  return j.dump(2);
}

}  // namespace bsl::transforms
