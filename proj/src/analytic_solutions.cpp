#include "bsl/analytic_solutions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bsl/exponents.hpp"
#include "json.hpp"

namespace bsl::analytic {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void check_point(double r, double phi) {
  require(std::isfinite(r) && r > 0.0 && r <= 1.0, ErrorCode::Domain, "subsolution is defined for 0 < r <= 1");
  require(std::isfinite(phi) && phi >= 0.0 && phi <= kHalfPi, ErrorCode::Domain, "phi must lie in [0, pi/2]");
}

}  // namespace

double supersolution_weak(double r, double phi, double k) {
  require(r > 0.0, ErrorCode::Domain, "r must be positive");
  return k * std::cos(phi) / r;
}

double alpha_bound(const ProblemParams& params) {
  params.require_subcritical();
  const double a = 2.0 * params.N - 1.0 - params.q;
  if (params.N == 2) return a;
  return std::min(a, 1.0 / (params.N - 2.0));
}

void check_admissible(const SubsolutionSpec& spec, const ProblemParams& params) {
  require(std::isfinite(spec.k) && spec.k > 0.0, ErrorCode::Domain, "subsolution needs k > 0");
  require(spec.R > 0.0 && spec.R <= 1.0, ErrorCode::Domain, "subsolution needs 0 < R <= 1");
  require(spec.alpha > 0.0 && spec.alpha < alpha_bound(params), ErrorCode::Domain,
          "alpha must lie in (0, alpha_bound)");
}

DerivativeStack subsolution_w(const SubsolutionSpec& spec, double r, double phi) {
  check_point(r, phi);
  const double k = spec.k, a = spec.alpha;
  const double ra = std::pow(r, a), c = std::cos(phi), s = std::sin(phi), c2 = c * c;
  DerivativeStack d;
  d.w = k * (1.0 - ra) / r * c;
  d.w_r = -k / (r * r) * (1.0 + (a - 1.0) * ra) * c;
  d.w_phi = -k / r * (1.0 - ra) * s;
  d.w_rr = k / (r * r * r) * (2.0 - (a - 1.0) * (a - 2.0) * ra) * c;
  d.w_phiphi = -k / r * (1.0 - ra) * c;
  const double k2 = k * k, r4 = std::pow(r, 4.0);
  d.P = k2 / r4 * (1.0 + 2.0 * (a * c2 - 1.0) * ra + ra * ra * ((a * a - 2.0 * a) * c2 + 1.0));
  d.P_r = -2.0 * k2 / (r4 * r) *
          (2.0 + (4.0 - a) * (a * c2 - 1.0) * ra + (2.0 - a) * ((a * a - 2.0 * a) * c2 + 1.0) * ra * ra);
  d.P_phi = -k2 * a * ra / r4 * (2.0 + (a - 2.0) * ra) * std::sin(2.0 * phi);
  return d;
}

double Lw_eval(const SubsolutionSpec& spec, double r, double phi, const ProblemParams& params) {
  params.require_profile_range();
  const DerivativeStack d = subsolution_w(spec, r, phi);
  const double N = params.N;
  const double absorption = std::pow(std::max(d.w, 0.0), params.q);
  if (d.P <= 0.0) return absorption;
  // cot(phi) w_phi in closed form, regular at phi = 0
  const double cot_wphi = -spec.k / r * (1.0 - std::pow(r, spec.alpha)) * std::cos(phi);
  const double lap = (N - 1.0) * d.w_r / r + d.w_rr + (N - 2.0) * cot_wphi / (r * r) + d.w_phiphi / (r * r);
  double div = std::pow(d.P, (N - 2.0) / 2.0) * lap;
  if (N != 2.0) div += (N - 2.0) / 2.0 * std::pow(d.P, (N - 4.0) / 2.0) * (d.P_r * d.w_r + d.P_phi * d.w_phi / (r * r));
  return -div + absorption;
}

double Lw_expansion(const SubsolutionSpec& spec, double r, double phi, const ProblemParams& params) {
  params.require_profile_range();
  check_point(r, phi);
  const double N = params.N, q = params.q, k = spec.k, a = spec.alpha, c = std::cos(phi);
  return std::pow(k, N - 1.0) * a * (a + 6.0 - 4.0 * N + (2.0 + a) * (N - 2.0) * c * c) * std::pow(r, a - (2.0 * N - 1.0)) * c +
         std::pow(k, q) * std::pow(r, -q) * std::pow(c, q);
}

RadiusScan find_subsolution_radius(const SubsolutionSpec& spec, const ProblemParams& params, int samples) {
  check_admissible(spec, params);
  require(samples >= 2, ErrorCode::InvalidInput, "need at least 2 samples per direction");
  RadiusScan scan;
  scan.samples = samples;
  double R = 1.0;
  for (int m = 0; m <= 60; ++m, R *= 0.5) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int a = 0; a < samples; ++a) {
      const double r = R * std::pow(0.01, 1.0 - static_cast<double>(a) / (samples - 1));
      for (int b = 0; b < samples; ++b) {
        const double phi = kHalfPi * b / (samples - 1);
        const double v = Lw_eval(spec, std::min(r, 1.0), phi, params);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    if (hi <= 0.0) {
      scan.found = true;
      scan.R = R;
      scan.lw_min = lo;
      scan.lw_max = hi;
      return scan;
    }
  }
  return scan;
}

std::string radius_scan_json(const RadiusScan& scan, const SubsolutionSpec& spec, const ProblemParams& params) {
  nlohmann::json j;
  j["params"] = {{"N", params.N}, {"p", params.p}, {"q", params.q}};
  j["k"] = spec.k;
  j["alpha"] = spec.alpha;
  j["alpha_bound"] = alpha_bound(params);
  j["found"] = scan.found;
  j["R"] = scan.R;
  j["lw_min"] = scan.lw_min;
  j["lw_max"] = scan.lw_max;
  j["samples"] = scan.samples;
  return j.dump(2);
}

double ball_kernel_Pk(std::span<const double> x, double k) {
  require(x.size() >= 2, ErrorCode::InvalidInput, "point must have dimension >= 2");
  double n2 = 0.0;
  for (double v : x) n2 += v * v;
  require(n2 > 0.0, ErrorCode::Domain, "ball kernel is singular at the origin");
  const double s = n2 + x.back();
  require(s <= 1e-12 * std::max(1.0, n2), ErrorCode::Domain, "point outside the closed ball B*");
  return -k * s / (2.0 * n2);
}

}  // namespace bsl::analytic
