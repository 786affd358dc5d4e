#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "bsl/params.hpp"

/// Axisymmetric profiles on the upper hemisphere, parametrized by the
/// colatitude phi in [0, pi/2].
///
/// Positive solutions of the hemisphere problem are unique, and the equation
/// and domain are invariant under rotations about the pole, so the profile
/// depends on phi only and the spherical divergence reduces to
///   sin^{2-N}(phi) (sin^{N-2}(phi) Q^m w')',   Q = beta^2 w^2 + w'^2.
/// Two problems are solved by shooting from the pole:
///   absorption:  -div(Q^m grad w) - Lambda Q^m w + |w|^{q-1} w = 0,  m = (N-2)/2
///   spectral:    -div(Q^m grad w) - lambda Q^m w = 0,                 m = (p-2)/2
/// both with w'(0) = 0 and w(pi/2) = 0.
namespace bsl::sphere {

class SphericalGrid {
 public:
  /// Uniform nodes phi_i = i h, h = (pi/2)/(M-1). Requires M >= 11.
  explicit SphericalGrid(std::size_t M);

  std::size_t size() const { return nodes_.size(); }
  double h() const { return h_; }
  double phi(std::size_t i) const { return nodes_[i]; }
  std::span<const double> nodes() const { return nodes_; }

 private:
  std::vector<double> nodes_;
  double h_;
};

struct Profile {
  double beta = 0.0;
  double lambda0 = 0.0;  // w(0), the shooting parameter
  double residual_norm = 0.0;
  std::vector<double> phi;
  std::vector<double> omega;
  std::vector<double> omega_prime;
};

struct ShootSettings {
  double tol_boundary = 1e-9;
  double tol_param = 1e-14;
  int max_iter = 200;
  int ode_steps_per_node = 4;
  double reg_eps = 1e-12;
  int scan_points = 121;
};

struct SpectralResult {
  double beta = 0.0;
  double lambda = 0.0;
  Profile profile;
};

/// Second derivative at the pole for the absorption profile,
/// (l^q (beta l)^{2-N} - Lambda l)/(N-1) with Lambda = (N-1) beta^2.
double startup_expansion(double lambda0, double beta, const ProblemParams& params);

/// Pole second derivative for the spectral equation: -lambda l/(N-1).
double startup_expansion_spectral(double lambda0, double beta, double p, int N);

/// Discrete residual of the absorption profile equation (p = N, q from params,
/// beta taken from the profile, Lambda = (N-1) beta^2) with centered second-order
/// differences. Entry M-1 is the Dirichlet node and is reported as 0.
std::vector<double> profile_residual(const Profile& profile, const ProblemParams& params,
                                     const SphericalGrid& grid);

/// Same discretization for the spectral equation with lambda = beta (beta (p-1) + p - N).
std::vector<double> spectral_residual(const Profile& profile, double p, int N, const SphericalGrid& grid);

/// Positive hemisphere profile with beta = beta_q. Throws NoBracket / NonConvergence.
Profile solve_profile(const ProblemParams& params, const SphericalGrid& grid,
                      const ShootSettings& settings = {});

/// Spectral exponent beta and positive eigenprofile with phi(0) = initial_value.
SpectralResult solve_spectral(double p, int N, const SphericalGrid& grid, const ShootSettings& settings = {},
                              double initial_value = 1.0);

/// C^1 cubic Hermite interpolant of a profile, evaluated anywhere on [0, pi/2]
/// (extended evenly to negative phi).
class ProfileCurve {
 public:
  explicit ProfileCurve(const Profile& profile);
  double operator()(double phi) const;
  double derivative(double phi) const;

 private:
  std::vector<double> omega_, omega_prime_;
  double h_;
};

/// CSV with header "phi,omega,omega_prime" and 17 significant digits.
void write_profile_csv(std::ostream& os, const Profile& profile);

}  // namespace bsl::sphere
