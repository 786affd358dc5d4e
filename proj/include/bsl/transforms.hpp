#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bsl/fd_operator.hpp"
#include "bsl/params.hpp"

/// Inversions, boundary reflection and the operator obtained by odd
/// reflection of a solution across a curved boundary.
namespace bsl::transforms {

using Point = std::vector<double>;

struct InversionSpec {
  Point center;
  double power = 1.0;

  /// Center (0, ..., 0, -1) with unit power; maps {x_N > 0} onto {|x|^2 + x_N < 0}.
  static InversionSpec omega(int N);
};

/// center + power (x - center) / |x - center|^2.
Point invert(const InversionSpec& spec, std::span<const double> x);

/// Axis-aligned sampling box; points are the centers of a per_dim^N lattice.
struct Box {
  Point lo, hi;
  int per_dim = 4;
  std::vector<Point> samples() const;
};

struct OrderReport {
  double h = 0.0;
  double err_h = 0.0;     // max |residual| over the box at step h
  double err_half = 0.0;  // same at h / 2
  double order = 0.0;     // log2(err_h / err_half); NaN when both vanish
  bool exact = false;     // both residuals are exactly 0
};

/// Discrete N-Laplacian of v o I on the box at steps h and h/2.
OrderReport conformal_residual(const InversionSpec& spec, const fd::Field& v, const Box& box, double h);

/// -Delta_N(u o I) + weight |u o I|^{q-1} (u o I) with weight |x - center|^{-2N}
/// (or 1 when unit_weight is set) on the box at steps h and h/2.
OrderReport weighted_equation_check(const InversionSpec& spec, const fd::Field& u, const ProblemParams& params,
                                    const Box& box, double h, bool unit_weight = false);

/// Boundary graph x_N = h(x') with h a polynomial of degree 2..4 in x'
/// (so h(0) = 0 and Dh(0) = 0). The domain is {x_N > h(x')}.
struct Monomial {
  double c = 0.0;
  std::vector<int> powers;  // one exponent per coordinate of x'
};

struct BoundaryChart {
  int N = 2;
  std::vector<Monomial> terms;
  double tube_width = 0.1;
  double patch_radius = 0.5;  // samples use |x'|_inf <= patch_radius

  static BoundaryChart flat(int N, double tube_width = 0.1);
  /// h = a |x'|^2 / 2.
  static BoundaryChart parabolic(int N, double a, double tube_width = 0.1);
  /// Chart of the dilated boundary: h_r(x') = h(r x') / r.
  BoundaryChart scaled(double r) const;
  void validate() const;

  double h(std::span<const double> xp) const;
  /// Boundary point over x'.
  Point boundary_point(std::span<const double> xp) const;
  /// Outward unit normal (Dh, -1) / sqrt(1 + |Dh|^2) over x'.
  Point outward_normal(std::span<const double> xp) const;
};

std::string chart_to_json(const BoundaryChart& chart);
/// Accepts {"flat": true, "N": n} or {"N": n, "terms": [{"c": .., "powers": [..]}], ...}.
BoundaryChart chart_from_json(const std::string& text);

struct Projection {
  Point xi;             // nearest boundary point
  double signed_distance = 0.0;  // > 0 inside the domain
  int iters = 0;
};

/// Nearest-point projection by damped Newton on the optimality condition
/// (y' - x') + (h(y') - x_N) Dh(y') = 0. Throws ProjectionFailure when
/// Newton stalls and Domain when x is outside the tube.
Projection project(const BoundaryChart& chart, std::span<const double> x);

/// psi(x) = 2 xi_x - x: the mirror image through the boundary along the normal.
Point reflect(const BoundaryChart& chart, std::span<const double> x);

/// D psi(x), by complex-step differentiation of the projection.
Eigen::MatrixXd reflect_jacobian(const BoundaryChart& chart, std::span<const double> x);

/// Field on the two-sided tube: v inside, -v o psi outside. Throws InvalidInput
/// when |v| exceeds trace_tol at a sampled boundary point.
fd::Field extend_odd(const BoundaryChart& chart, fd::Field v, double trace_tol = 1e-10);

/// Flux of the equation satisfied by the odd extension. Inside the domain it is
/// |eta|^{p-2} eta. Outside, with J = D psi(x), K = J^{-T} and b = |det J|,
///   A(x, eta) = b |K eta|^{p-2} K^T K eta.
/// K equals D psi(psi(x))^T because psi is an involution.
Eigen::VectorXd extended_operator(const BoundaryChart& chart, double p, std::span<const double> x,
                                  const Eigen::VectorXd& eta);
/// b(x) = |det D psi(x)| outside, 1 inside.
double extended_weight(const BoundaryChart& chart, std::span<const double> x);
/// d A_j / d eta_i in closed form.
Eigen::MatrixXd extended_operator_derivative(const BoundaryChart& chart, double p, std::span<const double> x,
                                             const Eigen::VectorXd& eta);

struct EllipticityReport {
  double width = 0.0;        // accepted tube width
  double gamma_ellip = 0.0;  // min Rayleigh quotient of dA/deta against |eta|^{p-2}|xi|^2
  double Gamma_norm = 0.0;   // max sum_ij |dA_j/deta_i| / |eta|^{p-2}
  double b_min = 0.0, b_max = 0.0;
  double gamma = 0.0;  // min(gamma_ellip, b_min)
  double Gamma = 0.0;  // max(Gamma_norm, b_max)
  int halvings = 0;
  int samples = 0;
};

/// Samples points xi + s nu over the patch with |s| <= width and random eta.
/// A width is accepted when every sample projects back onto its own foot point
/// and 0 < gamma <= Gamma; otherwise it is halved. Throws EllipticityFailure
/// below min_width.
EllipticityReport ellipticity_scan(const BoundaryChart& chart, double p, int samples, std::uint64_t seed = 1,
                                   double min_width = 1e-6);

std::string ellipticity_json(const EllipticityReport& report, const BoundaryChart& chart, double p);

}  // namespace bsl::transforms
