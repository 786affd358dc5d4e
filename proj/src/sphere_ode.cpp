#include "bsl/sphere_ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>

#include "bsl/exponents.hpp"

namespace bsl::sphere {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

/// Axisymmetric spherical equation in normal form w'' = f(phi, w, w').
struct Equation {
  int N = 2;
  double p = 2.0;
  double beta = 1.0;
  double lambda = 0.0;
  bool absorption = false;
  double q = 2.0;
  double reg2 = 0.0;

  double m() const { return 0.5 * (p - 2.0); }

  double source(double w) const { return absorption ? std::pow(std::abs(w), q - 1.0) * w : 0.0; }

  double grad2(double w, double wp) const { return std::max(beta * beta * w * w + wp * wp, reg2); }

  double second_derivative(double phi, double w, double wp) const {
    const double mm = m();
    const double Q = grad2(w, wp);
    const double cot = std::cos(phi) / std::sin(phi);
    const double g = absorption ? source(w) * std::pow(Q, 1.0 - mm) : 0.0;
    const double num = g - Q * ((N - 2) * cot * wp + lambda * w) - 2.0 * mm * beta * beta * w * wp * wp;
    const double den = beta * beta * w * w + (p - 1.0) * wp * wp;
    return num / std::max(den, reg2);
  }

  double pole_second(double w0) const {
    const double Q = grad2(w0, 0.0);
    const double g = absorption ? source(w0) * std::pow(Q, -m()) : 0.0;
    return (g - lambda * w0) / (N - 1.0);
  }
};

Equation absorption_equation(const ProblemParams& params, double beta, double reg_eps) {
  Equation eq;
  eq.N = params.N;
  eq.p = params.N;
  eq.beta = beta;
  eq.lambda = (params.N - 1.0) * beta * beta;
  eq.absorption = true;
  eq.q = params.q;
  eq.reg2 = reg_eps * reg_eps;
  return eq;
}

Equation spectral_equation(double p, int N, double beta, double reg_eps) {
  Equation eq;
  eq.N = N;
  eq.p = p;
  eq.beta = beta;
  eq.lambda = exponents::lambda_spectral(beta, p, N);
  eq.absorption = false;
  eq.reg2 = reg_eps * reg_eps;
  return eq;
}

struct Shot {
  bool crossed = false;  // w <= 0 before the equator or w(pi/2) < 0
  bool blew_up = false;
  std::vector<double> w, wp;
};

struct State {
  double w, wp;
};

State rk4_step(const Equation& eq, double phi, State s, double dphi) {
  auto f = [&](double x, State y) { return State{y.wp, eq.second_derivative(x, y.w, y.wp)}; };
  const State k1 = f(phi, s);
  const State k2 = f(phi + 0.5 * dphi, {s.w + 0.5 * dphi * k1.w, s.wp + 0.5 * dphi * k1.wp});
  const State k3 = f(phi + 0.5 * dphi, {s.w + 0.5 * dphi * k2.w, s.wp + 0.5 * dphi * k2.wp});
  const State k4 = f(phi + dphi, {s.w + dphi * k3.w, s.wp + dphi * k3.wp});
  return {s.w + dphi / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w),
          s.wp + dphi / 6.0 * (k1.wp + 2.0 * k2.wp + 2.0 * k3.wp + k4.wp)};
}

/// Integrates from the pole. The cot(phi) term is singular at phi = 0, so the
/// trajectory is seeded at h/2 from the second-order Taylor expansion.
/// With record = false the integration stops at the first sign change.
Shot shoot(const Equation& eq, double w0, const SphericalGrid& grid, int substeps, bool record) {
  const std::size_t M = grid.size();
  const double h = grid.h();
  const double blowup = 1e8 * std::max(1.0, std::abs(w0));
  Shot shot;
  if (record) {
    shot.w.assign(M, 0.0);
    shot.wp.assign(M, 0.0);
    shot.w[0] = w0;
  }

  const double a = eq.pole_second(w0);
  double phi = 0.5 * h;
  State s{w0 + 0.125 * a * h * h, 0.5 * a * h};
  const double equator_guard = kHalfPi * (1.0 - 1e-12);

  for (std::size_t node = 1; node < M; ++node) {
    const double target = grid.phi(node);
    const double dphi = (target - phi) / substeps;
    for (int k = 0; k < substeps; ++k) {
      s = rk4_step(eq, phi, s, dphi);
      phi += dphi;
      if (!std::isfinite(s.w) || !std::isfinite(s.wp) || std::abs(s.w) > blowup) {
        shot.blew_up = true;
        return shot;
      }
      if (s.w <= 0.0 && phi < equator_guard && !shot.crossed) {
        shot.crossed = true;
        if (!record) return shot;
      }
    }
    phi = target;
    if (node + 1 == M && s.w < 0.0) shot.crossed = true;
    if (record) {
      shot.w[node] = s.w;
      shot.wp[node] = s.wp;
    }
  }
  return shot;
}

/// +1 when the trajectory stays positive on [0, pi/2) (or blows up), -1 when it crosses.
int shot_sign(const Equation& eq, double w0, const SphericalGrid& grid, int substeps) {
  const Shot s = shoot(eq, w0, grid, substeps, false);
  return s.crossed ? -1 : 1;
}

void check_settings(const ShootSettings& s) {
  require(s.tol_boundary > 0 && s.tol_param > 0 && s.max_iter > 0 && s.ode_steps_per_node > 0 &&
              s.reg_eps > 0 && s.scan_points >= 2,
          ErrorCode::InvalidInput, "shoot settings must be positive");
}

std::vector<double> discrete_residual(const Equation& eq, const Profile& profile, const SphericalGrid& grid) {
  const std::size_t M = grid.size();
  require(profile.omega.size() == M, ErrorCode::InvalidInput, "profile is not sampled on the grid");
  for (double v : profile.omega)
    require(std::isfinite(v), ErrorCode::InvalidInput, "profile contains non-finite values");

  const double h = grid.h();
  const double mm = eq.m();
  const auto& w = profile.omega;
  std::vector<double> res(M, 0.0);

  {
    const double Q = eq.grad2(w[0], 0.0);
    const double wpp = 2.0 * (w[1] - w[0]) / (h * h);
    const double Qm = std::pow(Q, mm);
    res[0] = -(eq.N - 1.0) * Qm * wpp - eq.lambda * Qm * w[0] + eq.source(w[0]);
  }
  for (std::size_t i = 1; i + 1 < M; ++i) {
    const double phi = grid.phi(i);
    const double wp = (w[i + 1] - w[i - 1]) / (2.0 * h);
    const double wpp = (w[i + 1] - 2.0 * w[i] + w[i - 1]) / (h * h);
    const double Q = eq.grad2(w[i], wp);
    const double Qm = std::pow(Q, mm);
    double div = Qm * wpp + (eq.N - 2) * (std::cos(phi) / std::sin(phi)) * Qm * wp;
    if (mm != 0.0) {
      const double dQ = 2.0 * eq.beta * eq.beta * w[i] * wp + 2.0 * wp * wpp;
      div += mm * std::pow(Q, mm - 1.0) * dQ * wp;
    }
    res[i] = -div - eq.lambda * Qm * w[i] + eq.source(w[i]);
  }
  return res;
}

double sup_norm_interior(const std::vector<double>& res) {
  double r = 0.0;
  for (std::size_t i = 0; i + 1 < res.size(); ++i) r = std::max(r, std::abs(res[i]));
  return r;
}

Profile make_profile(const Shot& shot, double beta, double w0, const SphericalGrid& grid) {
  Profile prof;
  prof.beta = beta;
  prof.lambda0 = w0;
  prof.phi.assign(grid.nodes().begin(), grid.nodes().end());
  prof.omega = shot.w;
  prof.omega_prime = shot.wp;
  prof.omega.back() = 0.0;
  prof.omega_prime.front() = 0.0;
  return prof;
}

struct Bracket {
  double lo, hi;  // sign(lo) != sign(hi)
  int sign_lo;
};

/// Geometric scan for the first sign change of `sign_of` over [a, b].
template <class SignFn>
std::optional<Bracket> scan_first_change(SignFn&& sign_of, double a, double b, int points) {
  const double ratio = std::pow(b / a, 1.0 / (points - 1));
  double x_prev = a;
  int s_prev = sign_of(a);
  for (int i = 1; i < points; ++i) {
    const double x = (i == points - 1) ? b : a * std::pow(ratio, i);
    const int s = sign_of(x);
    if (s != s_prev) return Bracket{x_prev, x, s_prev};
    x_prev = x;
    s_prev = s;
  }
  return std::nullopt;
}

template <class SignFn>
Bracket bisect(SignFn&& sign_of, Bracket br, const ShootSettings& settings, const char* what) {
  int iter = 0;
  std::vector<double> widths;
  while (br.hi - br.lo > settings.tol_param * std::max(std::abs(br.hi), 1e-300)) {
    if (++iter > settings.max_iter)
      throw NonConvergenceError(std::string(what) + ": bisection reached max_iter", widths, 1.0);
    const double mid = 0.5 * (br.lo + br.hi);
    if (mid <= br.lo || mid >= br.hi) break;
    if (sign_of(mid) == br.sign_lo)
      br.lo = mid;
    else
      br.hi = mid;
    widths.push_back(br.hi - br.lo);
  }
  return br;
}

}  // namespace

SphericalGrid::SphericalGrid(std::size_t M) {
  require(M >= 11, ErrorCode::InvalidInput, "spherical grid needs at least 11 nodes");
  h_ = kHalfPi / static_cast<double>(M - 1);
  nodes_.resize(M);
  for (std::size_t i = 0; i < M; ++i) nodes_[i] = h_ * static_cast<double>(i);
  nodes_.back() = kHalfPi;
}

double startup_expansion(double lambda0, double beta, const ProblemParams& params) {
  params.validate();
  require(lambda0 > 0.0, ErrorCode::Domain, "startup expansion needs lambda0 > 0");
  return absorption_equation(params, beta, 0.0).pole_second(lambda0);
}

double startup_expansion_spectral(double lambda0, double beta, double p, int N) {
  require(lambda0 > 0.0, ErrorCode::Domain, "startup expansion needs lambda0 > 0");
  return spectral_equation(p, N, beta, 0.0).pole_second(lambda0);
}

std::vector<double> profile_residual(const Profile& profile, const ProblemParams& params,
                                     const SphericalGrid& grid) {
  params.validate();
  require(params.q > params.N - 1.0, ErrorCode::Domain, "profile residual requires q > N - 1");
  return discrete_residual(absorption_equation(params, profile.beta, 1e-300), profile, grid);
}

std::vector<double> spectral_residual(const Profile& profile, double p, int N, const SphericalGrid& grid) {
  require(p > 1.0 && N >= 2, ErrorCode::Domain, "spectral residual requires p > 1, N >= 2");
  return discrete_residual(spectral_equation(p, N, profile.beta, 1e-300), profile, grid);
}

Profile solve_profile(const ProblemParams& params, const SphericalGrid& grid, const ShootSettings& settings) {
  params.require_subcritical();
  check_settings(settings);
  const double beta = exponents::beta_q(params);
  const double c = exponents::const_solution(params);
  const Equation eq = absorption_equation(params, beta, settings.reg_eps * c);
  auto sign_of = [&](double w0) { return shot_sign(eq, w0, grid, settings.ode_steps_per_node); };

  // Small data behave like the linear spectral problem with beta_q > 1 and
  // cross early; the smallest crossing -> positive transition is the minimal solution.
  auto br = scan_first_change(sign_of, 1e-3 * c, 1e3 * c, settings.scan_points);
  if (!br || br->sign_lo != -1)
    fail(ErrorCode::NoBracket, "no sign change of the shooting map in [1e-3 c, 1e3 c]");
  const Bracket fin = bisect(sign_of, *br, settings, "solve_profile");

  const Shot shot = shoot(eq, fin.hi, grid, settings.ode_steps_per_node, true);
  if (shot.blew_up || shot.crossed)
    throw NonConvergenceError("solve_profile: final trajectory is not positive", {}, 1.0);
  const double end = shot.w.back();
  if (std::abs(end) > settings.tol_boundary * std::max(1.0, fin.hi))
    throw NonConvergenceError("solve_profile: |w(pi/2)| = " + std::to_string(end) + " above tolerance", {end},
                              1.0);
  Profile prof = make_profile(shot, beta, fin.hi, grid);
  prof.residual_norm = sup_norm_interior(profile_residual(prof, params, grid));
  return prof;
}

SpectralResult solve_spectral(double p, int N, const SphericalGrid& grid, const ShootSettings& settings,
                              double initial_value) {
  require(std::isfinite(p) && p > 1.0 && N >= 2, ErrorCode::Domain, "spectral problem requires p > 1, N >= 2");
  require(initial_value > 0.0, ErrorCode::Domain, "initial value must be positive");
  check_settings(settings);
  const double reg = settings.reg_eps * initial_value;
  auto sign_of = [&](double beta) {
    return shot_sign(spectral_equation(p, N, beta, reg), initial_value, grid, settings.ode_steps_per_node);
  };
  auto br = scan_first_change(sign_of, 1e-3, 10.0 * N, settings.scan_points);
  if (!br || br->sign_lo != 1) fail(ErrorCode::NoBracket, "no sign change of the spectral shooting map");
  const Bracket fin = bisect(sign_of, *br, settings, "solve_spectral");

  const Equation eq = spectral_equation(p, N, fin.lo, reg);
  const Shot shot = shoot(eq, initial_value, grid, settings.ode_steps_per_node, true);
  if (shot.blew_up || shot.crossed)
    throw NonConvergenceError("solve_spectral: final trajectory is not positive", {}, 1.0);
  const double end = shot.w.back();
  if (std::abs(end) > settings.tol_boundary * initial_value)
    throw NonConvergenceError("solve_spectral: |phi(pi/2)| = " + std::to_string(end) + " above tolerance",
                              {end}, 1.0);
  SpectralResult out;
  out.beta = fin.lo;
  out.lambda = eq.lambda;
  out.profile = make_profile(shot, fin.lo, initial_value, grid);
  out.profile.residual_norm = sup_norm_interior(spectral_residual(out.profile, p, N, grid));
  return out;
}

ProfileCurve::ProfileCurve(const Profile& profile)
    : omega_(profile.omega), omega_prime_(profile.omega_prime) {
  require(omega_.size() >= 2 && omega_.size() == omega_prime_.size(), ErrorCode::InvalidInput,
          "profile curve needs matching value and derivative samples");
  h_ = kHalfPi / static_cast<double>(omega_.size() - 1);
}

namespace {

struct Cell {
  std::size_t i;
  double s;  // local coordinate in [0, 1] (may leave it at the ends)
};

Cell locate(double phi, double h, std::size_t n) {
  const double x = phi / h;
  double fi = std::floor(x);
  fi = std::clamp(fi, 0.0, static_cast<double>(n - 2));
  return {static_cast<std::size_t>(fi), x - fi};
}

}  // namespace

double ProfileCurve::operator()(double phi) const {
  const double a = std::abs(phi);
  const Cell c = locate(a, h_, omega_.size());
  const double s = c.s;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  return h00 * omega_[c.i] + h10 * h_ * omega_prime_[c.i] + h01 * omega_[c.i + 1] + h11 * h_ * omega_prime_[c.i + 1];
}

double ProfileCurve::derivative(double phi) const {
  const double a = std::abs(phi);
  const Cell c = locate(a, h_, omega_.size());
  const double s = c.s;
  const double d00 = 6 * s * s - 6 * s, d10 = 3 * s * s - 4 * s + 1;
  const double d01 = -6 * s * s + 6 * s, d11 = 3 * s * s - 2 * s;
  const double d = (d00 * omega_[c.i] + d01 * omega_[c.i + 1]) / h_ + d10 * omega_prime_[c.i] + d11 * omega_prime_[c.i + 1];
  return phi < 0 ? -d : d;
}

void write_profile_csv(std::ostream& os, const Profile& profile) {
  os << "phi,omega,omega_prime\n";
  char buf[128];
  for (std::size_t i = 0; i < profile.omega.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", profile.phi[i], profile.omega[i], profile.omega_prime[i]);
    os << buf;
  }
}

}  // namespace bsl::sphere
