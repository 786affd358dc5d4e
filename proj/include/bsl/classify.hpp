#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bsl/errors.hpp"
#include "bsl/halfspace_pde.hpp"
#include "bsl/params.hpp"

/// Classification of a half-space sector field near the singular point
/// r = 0 as removable, weak (u ~ k cos(phi)/r) or strong (u ~ r^{-beta_q} omega).
namespace bsl::classify {

using halfspace::SolutionField;

struct Window {
  double r_lo = 0.0, r_hi = 0.0;
};

/// [10 eps, R_out / 10]; needs R_out / eps >= 1000.
Window default_window(const SolutionField& field);

struct Thresholds {
  double slope_band = 0.15;
  double weak_trend_tol = 0.05;    // |trend - 1| for Weak
  double strong_trend_min = 1.5;   // per-decade growth of the k estimate for Strong
  double removable_slope = -0.25;
  double phi_margin = 0.1;         // k estimate uses phi <= pi/2 - phi_margin
  double harnack_margin = 0.05;
};

enum class Verdict { Removable, Weak, Strong };
std::string to_string(Verdict v);

/// Least-squares slope of ln max_phi u(r, .) against ln r over the window nodes.
/// Throws DegenerateFit when some ring maximum is <= 0.
double fit_exponent(const SolutionField& field, const Window& window);

struct KEstimate {
  double k_hat = 0.0;  // max over window nodes of u r / cos(phi), phi <= pi/2 - margin
  double trend = 1.0;  // growth factor of the ring estimate per decade of decreasing r
  std::vector<double> r, ring;  // per window node
};

KEstimate estimate_k(const SolutionField& field, const Window& window, double phi_margin = 0.1);

/// max over r of (max_phi u/rho) / (min_phi u/rho) on the circle |x| = r with
/// rho = r cos(phi) and phi <= pi/2 - margin. Throws DegenerateFit on nonpositive samples.
double harnack_check(const SolutionField& field, const std::vector<double>& r_values, double margin = 0.05);

struct Classification {
  std::optional<Verdict> verdict;  // empty only inside AmbiguousError
  double slope_fit = 0.0;
  std::optional<double> k_hat;     // Weak only
  double k_estimate = 0.0;         // raw estimate, reported for every verdict
  double trend = 1.0;
  double harnack_c = 1.0;
  bool bounded = true;
  Window window;
  std::string note;
};

/// Thrown when no band or more than one band matches; carries the diagnostics.
class AmbiguousError : public Error {
 public:
  AmbiguousError(const std::string& what, Classification diagnostics)
      : Error(ErrorCode::Ambiguous, what), diagnostics_(std::move(diagnostics)) {}
  const Classification& diagnostics() const noexcept { return diagnostics_; }

 private:
  Classification diagnostics_;
};

/// Strong: |slope + beta_q| <= band and trend >= strong_trend_min.
/// Weak: |slope + 1| <= band and |trend - 1| <= weak_trend_tol; k_hat = estimate.
/// Removable: slope >= removable_slope and the ring maxima stay bounded.
/// A field that vanishes on the window is Removable.
Classification classify(const SolutionField& field, const ProblemParams& params, const Window& window,
                        const Thresholds& th = {});
Classification classify(const SolutionField& field, const ProblemParams& params);

/// Field on the dilated sector [eps/r0, R_out/r0] with values r0^{amplitude} u(r0 x).
/// amplitude = beta_q gives the transformation that keeps the equation; amplitude = 1
/// keeps the weak strength.
SolutionField rescale(const SolutionField& field, double r0, double amplitude);

std::string classification_json(const Classification& c, const ProblemParams& params);

}  // namespace bsl::classify
