#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bsl/params.hpp"

/// Axisymmetric solutions of
///   -div(|Du|^{N-2} Du) + A |u|^{q-1} u - B = 0
/// on the truncated half-space sector eps < r < R_out, 0 <= phi <= pi/2,
/// in the coordinates t = ln r. After multiplying by e^{Nt} the operator is
///   -(G u_t)_t - sin^{2-N}(sin^{N-2} G u_phi)_phi + e^{Nt}(A|u|^{q-1}u - B),
///   G = (u_t^2 + u_phi^2)^{(N-2)/2}.
///
/// The difference quotients are fitted (2 sinh / 2 sin denominators) so that
/// k cos(phi)/r is an exact discrete N-harmonic function. The discrete
/// supersolution k cos(phi)/r then bounds every weak_k solution from above up
/// to solver precision.
namespace bsl::halfspace {

class SectorGrid {
 public:
  SectorGrid(double eps, double R_out, std::size_t n_t, std::size_t n_phi);
  /// Grid whose t-spacing is as close as possible to ht (never coarser).
  static SectorGrid with_spacing(double eps, double R_out, double ht, std::size_t n_phi);

  double eps() const { return eps_; }
  double R_out() const { return R_out_; }
  std::size_t n_t() const { return n_t_; }
  std::size_t n_phi() const { return n_phi_; }
  double ht() const { return ht_; }
  double hphi() const { return hphi_; }
  double t(std::size_t i) const;
  double r(std::size_t i) const;
  double phi(std::size_t j) const;

 private:
  double eps_, R_out_;
  std::size_t n_t_, n_phi_;
  double ht_, hphi_;
};

/// Dirichlet data on the inner arc r = eps; the outer arc and phi = pi/2 are 0.
struct BoundarySpec {
  enum class Kind { WeakK, Custom };
  Kind kind = Kind::WeakK;
  double k = 0.0;
  std::vector<double> inner;  // Custom only, one value per phi node

  static BoundarySpec weak_k(double k);
  static BoundarySpec custom(std::vector<double> inner_values);
  double inner_value(const SectorGrid& grid, std::size_t j) const;
  std::string describe() const;
};

struct SolutionField {
  SectorGrid grid;
  BoundarySpec bc;
  std::vector<double> u;  // row-major, u[i * n_phi + j]
  int iters = 0;
  int picard_steps = 0;
  double final_update_norm = 0.0;  // sup|du| / sup|u| of the last step
  double residual_norm = 0.0;      // sup of the unscaled residual over unknown nodes

  double& at(std::size_t i, std::size_t j) { return u[i * grid.n_phi() + j]; }
  double at(std::size_t i, std::size_t j) const { return u[i * grid.n_phi() + j]; }
};

struct SolveSettings {
  double tol_update = 1e-11;
  int max_newton = 200;
  double damping = 1.0;
  double reg_eps = 1e-8;  // relative to the largest boundary value
  int continuation_steps = 4;
  bool drop_absorption = false;  // A = 0 sanity mode (pure N-Laplacian)
};

/// Field with the given boundary data written on the Dirichlet nodes and
/// interior initialized to the supersolution (weak_k) or a 1/r extension (custom).
SolutionField initial_field(const SectorGrid& grid, const BoundarySpec& bc);

/// Residual of the PDE in physical form (the e^{Nt} factor removed). Entries on
/// Dirichlet nodes (i = 0, i = n_t - 1, j = n_phi - 1) are 0.
std::vector<double> assemble_residual(const SolutionField& field, const ProblemParams& params,
                                      const SectorGrid& grid, double reg = 0.0);

/// Damped Newton with regularization continuation and a lagged-diffusivity
/// fallback. Throws IllPosed for q <= N - 1 and NonConvergenceError otherwise.
SolutionField solve_field(const ProblemParams& params, const SectorGrid& grid, const BoundarySpec& bc,
                          const SolveSettings& settings = {});

/// max over phi nodes of u(r, .), 4-point Lagrange interpolation in t.
double probe_max(const SolutionField& field, double r);
/// u(r, phi_j) at a phi node, same interpolation.
double probe_at(const SolutionField& field, double r, std::size_t j);

struct StrongFamilyReport {
  std::vector<double> k_list;
  std::vector<double> probe_r;
  std::vector<std::vector<double>> s;  // s[k][probe] = r^{beta_q} max_phi u_k(r, .)
  std::optional<double> omega0;        // reference w(0) when supplied
  bool increasing = true;
  std::optional<double> last_increment;  // relative increment of the last pair
  std::optional<bool> saturating;        // last_increment <= 10%
  std::optional<bool> near_profile;      // final s within 10% of omega0 at every probe
  std::vector<SolutionField> fields;
};

StrongFamilyReport strong_family(const ProblemParams& params, const SectorGrid& grid,
                                 const std::vector<double>& k_list, const std::vector<double>& probe_r,
                                 const SolveSettings& settings = {}, std::optional<double> omega0 = {});

struct TrendReport {
  ProblemParams params;
  double k = 1.0;
  double probe_r = 0.0;
  std::vector<double> eps_list;
  std::vector<double> values;         // m(eps) = max_phi u(probe_r, .)
  std::vector<double> fit_slopes;     // d ln m / d ln eps between consecutive eps
  std::vector<double> ratios;         // m(eps_{i}) / m(eps_{i+1})
  std::string verdict;                // "decreasing", "stable", "not-decreasing", "not-stable", "none"
  bool pass = true;
};

/// Solves weak_k for each inner radius with a common t-spacing ht and reports
/// m(eps). For q > q_c the verdict checks a ratio >= 1.2 per step over the last
/// two steps; for q < q_c it checks the last relative change <= 2%; q = q_c and
/// single-entry lists get verdict "none".
TrendReport removability_experiment(const ProblemParams& params, double k, const std::vector<double>& eps_list,
                                    double probe_r, double R_out, double ht, std::size_t n_phi,
                                    const SolveSettings& settings = {});

struct BoundDiagnostics {
  double lambda_hat = 0.0;  // max A |x|^N u^{q+1-N}
  double C_hat = 0.0;       // max u (A |x|^{q+1})^{1/(q+1-N)} / rho
  std::size_t lambda_i = 0, lambda_j = 0;
  std::size_t C_i = 0, C_j = 0;
};

BoundDiagnostics bound_diagnostics(const SolutionField& field, const ProblemParams& params);

/// CSV with header "t,r,phi,u" and 17 significant digits.
void write_field_csv(std::ostream& os, const SolutionField& field);
/// Reads a field CSV back; the grid is reconstructed from the t and phi columns.
SolutionField read_field_csv(std::istream& is);

/// JSON object with keys params, probes, values, verdict, fit_slopes.
std::string trend_json(const TrendReport& report);
std::string strong_family_json(const StrongFamilyReport& report, const ProblemParams& params);

}  // namespace bsl::halfspace
