#pragma once

#include <functional>
#include <span>
#include <vector>

/// Cartesian finite-difference evaluation of div(|Du|^{p-2} Du) for functions
/// given as callables on R^N. Used as an independent oracle for the
/// coordinate-specific discretizations.
namespace bsl::fd {

using Field = std::function<double(std::span<const double>)>;

/// Fluxes at the half points x +- (h/2) e_i, gradients there by central
/// differences of step h. Second order in h.
double p_laplacian(const Field& u, std::span<const double> x, double p, double h);

/// log2(e(h) / e(h/2)) for two error levels.
double observed_order(double err_h, double err_half);

}  // namespace bsl::fd
