#pragma once

#include <span>
#include <string>

#include "bsl/params.hpp"

/// Closed-form comparison functions for the half-space problem with p = N:
/// the N-harmonic dipole k x_N / |x|^2, the local subsolution
///   w = k (1 - r^alpha) r^{-1} cos(phi),
/// and the ball kernel obtained from the dipole by inversion.
namespace bsl::analytic {

struct SubsolutionSpec {
  double k = 1.0;
  double alpha = 0.5;
  double R = 1.0;  // validity radius, 0 < R <= 1
};

/// Point values of w and its derivatives; P = w_r^2 + r^{-2} w_phi^2.
struct DerivativeStack {
  double w = 0, w_r = 0, w_phi = 0, w_rr = 0, w_phiphi = 0;
  double P = 0, P_r = 0, P_phi = 0;
};

/// k cos(phi) / r.
double supersolution_weak(double r, double phi, double k);

/// min{2N - 1 - q, 1/(N - 2)} with 1/(N - 2) = +inf for N = 2. Requires N - 1 < q < 2N - 1.
double alpha_bound(const ProblemParams& params);

/// Throws Domain unless k > 0, 0 < R <= 1 and 0 < alpha < alpha_bound(params).
void check_admissible(const SubsolutionSpec& spec, const ProblemParams& params);

/// Exact derivative stack of w. Requires 0 < r <= 1 and phi in [0, pi/2].
DerivativeStack subsolution_w(const SubsolutionSpec& spec, double r, double phi);

/// Lw = -div(|Dw|^{N-2} Dw) + w^q from the closed-form stack.
double Lw_eval(const SubsolutionSpec& spec, double r, double phi, const ProblemParams& params);

/// Leading terms k^{N-1} alpha [alpha + 6 - 4N + (2 + alpha)(N - 2) cos^2 phi] r^{alpha - (2N-1)} cos phi
/// + k^q r^{-q} cos^q phi of Lw as r -> 0. The bracket is the linearization of the
/// N-Laplacian at the dipole applied to -k r^{alpha-1} cos phi; for N = 2 it reduces to
/// alpha (alpha - 2), the plain Laplacian of r^{alpha-1} cos phi.
double Lw_expansion(const SubsolutionSpec& spec, double r, double phi, const ProblemParams& params);

struct RadiusScan {
  bool found = false;
  double R = 0.0;  // largest dyadic radius with Lw <= 0 on the whole sample
  double lw_min = 0.0, lw_max = 0.0;  // over the sample at R
  int samples = 64;
};

/// Scans R = 1, 1/2, 1/4, ... for the first radius where Lw <= 0 on a
/// samples x samples grid of (r, phi) in [R/100, R] x [0, pi/2] (r log-spaced).
RadiusScan find_subsolution_radius(const SubsolutionSpec& spec, const ProblemParams& params, int samples = 64);

/// JSON report: params, alpha, k, found, R, lw_min, lw_max.
std::string radius_scan_json(const RadiusScan& scan, const SubsolutionSpec& spec, const ProblemParams& params);

/// P_k(x) = -k (|x|^2 + x_N) / (2 |x|^2), positive in B* = {|x|^2 + x_N < 0}.
double ball_kernel_Pk(std::span<const double> x, double k);

}  // namespace bsl::analytic
