#include "bsl/halfspace_pde.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "bsl/exponents.hpp"
#include "dual.hpp"
#include "json.hpp"

namespace bsl::halfspace {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

/// Grid-dependent coefficients of the fitted flux scheme.
struct Scheme {
  int N = 2;
  double m = 0.0;  // (N-2)/2
  double q = 2.0, A = 1.0, B = 0.0;
  bool absorption = true;
  double reg2 = 0.0;
  double dt1, ct, dt2, dp1, cp, dp2, Dt;
  std::vector<double> s_plus, s_minus, w, expNt;

  Scheme(const ProblemParams& params, const SectorGrid& g, double reg, bool drop_absorption) {
    N = params.N;
    m = 0.5 * (N - 2.0);
    q = params.q;
    A = params.A;
    B = params.B;
    absorption = !drop_absorption;
    reg2 = reg * reg;
    const double ht = g.ht(), hp = g.hphi();
    dt1 = 2.0 * std::sinh(ht / 2);
    ct = 2.0 * std::cosh(ht / 2);
    dt2 = 2.0 * std::sinh(ht);
    dp1 = 2.0 * std::sin(hp / 2);
    cp = 2.0 * std::cos(hp / 2);
    dp2 = 2.0 * std::sin(hp);
    Dt = 2.0 * std::sinh((N - 1) * ht / 2) / (N - 1);
    const std::size_t np = g.n_phi();
    s_plus.resize(np);
    s_minus.resize(np);
    w.resize(np);
    for (std::size_t j = 0; j < np; ++j) {
      const double phi = g.phi(j);
      s_plus[j] = std::pow(std::abs(std::sin(phi + hp / 2)), N - 2.0);
      s_minus[j] = std::pow(std::abs(std::sin(phi - hp / 2)), N - 2.0);
      // Cell weight that makes cos(phi) an exact eigenfunction of the discrete
      // spherical operator; it tends to sin^{N-2}(phi).
      const double c = std::cos(phi);
      w[j] = c > 0.0 ? (s_plus[j] * (c - std::cos(phi + hp)) + s_minus[j] * (c - std::cos(phi - hp))) /
                           (dp1 * dp1 * (N - 1.0) * c)
                     : 1.0;
    }
    expNt.resize(g.n_t());
    for (std::size_t i = 0; i < g.n_t(); ++i) expNt[i] = std::exp(N * g.t(i));
  }

  template <class T>
  T diffusivity(const T& gt, const T& gp, bool freeze) const {
    if (m == 0.0) return T(1.0);
    if (freeze) {
      const double a = detail::value(gt), b = detail::value(gp);
      return T(std::pow(a * a + b * b + reg2, m));
    }
    using std::pow;
    using detail::pow;
    return pow(gt * gt + gp * gp + T(reg2), m);
  }

  /// Scaled residual at (i, j); U[a][b] = u(i + a - 1, j + b - 1).
  template <class T>
  T residual(const T (&U)[3][3], std::size_t i, std::size_t j, bool freeze) const {
    auto Dphi = [&](int a) { return (U[a][2] - U[a][0]) / T(dp2); };
    auto Dt2 = [&](int b) { return (U[2][b] - U[0][b]) / T(dt2); };

    const T gt_p = (U[2][1] - U[1][1]) / T(dt1);
    const T gp_tp = (Dphi(1) + Dphi(2)) / T(ct);
    const T gt_m = (U[1][1] - U[0][1]) / T(dt1);
    const T gp_tm = (Dphi(0) + Dphi(1)) / T(ct);
    const T Ft_p = diffusivity(gt_p, gp_tp, freeze) * gt_p;
    const T Ft_m = diffusivity(gt_m, gp_tm, freeze) * gt_m;

    const T gp_p = (U[1][2] - U[1][1]) / T(dp1);
    const T gt_pp = (Dt2(1) + Dt2(2)) / T(cp);
    const T gp_m = (U[1][1] - U[1][0]) / T(dp1);
    const T gt_pm = (Dt2(0) + Dt2(1)) / T(cp);
    const T Fp_p = T(s_plus[j]) * diffusivity(gt_pp, gp_p, freeze) * gp_p;
    const T Fp_m = T(s_minus[j]) * diffusivity(gt_pm, gp_m, freeze) * gp_m;

    T r = -(Ft_p - Ft_m) / T(Dt) - (Fp_p - Fp_m) / T(dp1 * w[j]);
    if (absorption) {
      using detail::signed_pow;
      r += T(expNt[i]) * (T(A) * signed_pow(U[1][1], q) - T(B));
    }
    return r;
  }
};

struct Layout {
  std::size_t n_t, n_phi;
  bool unknown(std::size_t i, std::size_t j) const { return i >= 1 && i + 1 < n_t && j + 1 < n_phi; }
  int index(std::size_t i, std::size_t j) const { return static_cast<int>((i - 1) * (n_phi - 1) + j); }
  int size() const { return static_cast<int>((n_t - 2) * (n_phi - 1)); }
};

/// Stencil gather with the mirror ghost u(i, -1) = u(i, 1).
std::size_t mirror(std::ptrdiff_t j) { return static_cast<std::size_t>(j < 0 ? -j : j); }

Eigen::VectorXd scaled_residual(const Scheme& sc, const Layout& L, const std::vector<double>& u) {
  Eigen::VectorXd R(L.size());
  for (std::size_t i = 1; i + 1 < L.n_t; ++i) {
    for (std::size_t j = 0; j + 1 < L.n_phi; ++j) {
      double U[3][3];
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          U[a][b] = u[(i + a - 1) * L.n_phi + mirror(static_cast<std::ptrdiff_t>(j) + b - 1)];
      R[L.index(i, j)] = sc.residual(U, i, j, false);
    }
  }
  return R;
}

using D9 = detail::Dual<9>;

Eigen::SparseMatrix<double> jacobian(const Scheme& sc, const Layout& L, const std::vector<double>& u, bool freeze) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(L.size()) * 9);
  for (std::size_t i = 1; i + 1 < L.n_t; ++i) {
    for (std::size_t j = 0; j + 1 < L.n_phi; ++j) {
      D9 U[3][3];
      int col[3][3];
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          const std::size_t ii = i + a - 1;
          const std::size_t jj = mirror(static_cast<std::ptrdiff_t>(j) + b - 1);
          const double val = u[ii * L.n_phi + jj];
          if (L.unknown(ii, jj)) {
            U[a][b] = D9::variable(val, 3 * a + b);
            col[a][b] = L.index(ii, jj);
          } else {
            U[a][b] = D9(val);
            col[a][b] = -1;
          }
        }
      }
      const D9 r = sc.residual(U, i, j, freeze);
      const int row = L.index(i, j);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          if (col[a][b] >= 0) trip.emplace_back(row, col[a][b], r.d[3 * a + b]);
    }
  }
  Eigen::SparseMatrix<double> J(L.size(), L.size());
  J.setFromTriplets(trip.begin(), trip.end());
  J.makeCompressed();
  return J;
}

void add_step(const Layout& L, std::vector<double>& u, const Eigen::VectorXd& du, double s) {
  for (std::size_t i = 1; i + 1 < L.n_t; ++i)
    for (std::size_t j = 0; j + 1 < L.n_phi; ++j) u[i * L.n_phi + j] += s * du[L.index(i, j)];
}

double sup_abs(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

double max_boundary_value(const SolutionField& f) {
  double s = 0.0;
  for (std::size_t j = 0; j < f.grid.n_phi(); ++j) s = std::max(s, std::abs(f.at(0, j)));
  return s;
}

/// Newton iteration at a fixed regularization. Returns the number of steps.
void newton(SolutionField& field, const Scheme& sc, const Layout& L, const SolveSettings& settings, double tol,
            std::vector<double>& history, double& last_damping) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;
  for (int it = 0; it < settings.max_newton; ++it) {
    const Eigen::VectorXd R = scaled_residual(sc, L, field.u);
    const double rnorm = R.norm();
    history.push_back(rnorm);
    if (!std::isfinite(rnorm)) throw NonConvergenceError("solve_field: non-finite residual", history, last_damping);

    auto solve_with = [&](bool freeze) -> std::optional<Eigen::VectorXd> {
      const Eigen::SparseMatrix<double> J = jacobian(sc, L, field.u, freeze);
      if (!analyzed) {
        lu.analyzePattern(J);
        analyzed = true;
      }
      lu.factorize(J);
      if (lu.info() != Eigen::Success) return std::nullopt;
      Eigen::VectorXd du = lu.solve(-R);
      if (lu.info() != Eigen::Success || !du.allFinite()) return std::nullopt;
      return du;
    };

    auto du = solve_with(false);
    const double usup = std::max(sup_abs(field.u), 1e-300);
    double s = settings.damping;
    bool picard = false;
    if (du) {
      const double rel = du->lpNorm<Eigen::Infinity>() / usup;
      if (rel <= tol) {
        add_step(L, field.u, *du, 1.0);
        field.final_update_norm = rel;
        field.iters += 1;
        last_damping = 1.0;
        return;
      }
      // Armijo backtracking on the Euclidean residual norm
      while (s >= 1e-3) {
        std::vector<double> trial = field.u;
        add_step(L, trial, *du, s);
        const double tn = scaled_residual(sc, L, trial).norm();
        if (std::isfinite(tn) && tn <= (1.0 - 1e-4 * s) * rnorm) break;
        s *= 0.5;
      }
      picard = s < 1e-3;
    } else {
      picard = true;
    }

    if (picard) {
      du = solve_with(true);
      if (!du) throw NonConvergenceError("solve_field: singular linearization", history, s);
      s = 1.0;
      field.picard_steps += 1;
    }
    add_step(L, field.u, *du, s);
    last_damping = s;
    field.iters += 1;
    field.final_update_norm = s * du->lpNorm<Eigen::Infinity>() / usup;
    if (field.final_update_norm <= tol) return;
  }
  throw NonConvergenceError("solve_field: max_newton reached (update " + std::to_string(field.final_update_norm) +
                                ")",
                            history, last_damping);
}

double lagrange4(const SolutionField& f, double r, std::size_t j) {
  const SectorGrid& g = f.grid;
  require(std::isfinite(r) && r >= g.eps() * (1 - 1e-12) && r <= g.R_out() * (1 + 1e-12), ErrorCode::InvalidInput,
          "probe radius outside the sector");
  const double x = (std::log(r) - g.t(0)) / g.ht();
  const std::ptrdiff_t last = static_cast<std::ptrdiff_t>(g.n_t()) - 1;
  std::ptrdiff_t i0 = static_cast<std::ptrdiff_t>(std::floor(x)) - 1;
  i0 = std::clamp<std::ptrdiff_t>(i0, 0, last - 3);
  double sum = 0.0;
  for (int a = 0; a < 4; ++a) {
    double l = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) l *= (x - static_cast<double>(i0 + b)) / static_cast<double>(a - b);
    sum += l * f.at(static_cast<std::size_t>(i0 + a), j);
  }
  return sum;
}

}  // namespace

SectorGrid::SectorGrid(double eps, double R_out, std::size_t n_t, std::size_t n_phi)
    : eps_(eps), R_out_(R_out), n_t_(n_t), n_phi_(n_phi) {
  require(std::isfinite(eps) && std::isfinite(R_out) && eps > 0.0 && eps < R_out, ErrorCode::InvalidInput,
          "sector grid needs 0 < eps < R_out");
  require(n_t >= 17 && n_phi >= 17, ErrorCode::InvalidInput, "sector grid needs n_t, n_phi >= 17");
  ht_ = (std::log(R_out) - std::log(eps)) / static_cast<double>(n_t - 1);
  hphi_ = kHalfPi / static_cast<double>(n_phi - 1);
}

SectorGrid SectorGrid::with_spacing(double eps, double R_out, double ht, std::size_t n_phi) {
  require(ht > 0.0 && eps > 0.0 && R_out > eps, ErrorCode::InvalidInput, "invalid spacing request");
  const double span = std::log(R_out) - std::log(eps);
  const auto n = static_cast<std::size_t>(std::ceil(span / ht - 1e-9)) + 1;
  return SectorGrid(eps, R_out, std::max<std::size_t>(n, 17), n_phi);
}

double SectorGrid::t(std::size_t i) const {
  if (i + 1 == n_t_) return std::log(R_out_);
  return std::log(eps_) + ht_ * static_cast<double>(i);
}
double SectorGrid::r(std::size_t i) const {
  if (i == 0) return eps_;
  if (i + 1 == n_t_) return R_out_;
  return std::exp(t(i));
}
double SectorGrid::phi(std::size_t j) const {
  if (j + 1 == n_phi_) return kHalfPi;
  return hphi_ * static_cast<double>(j);
}

BoundarySpec BoundarySpec::weak_k(double k) {
  require(std::isfinite(k) && k >= 0.0, ErrorCode::Domain, "weak_k needs finite k >= 0");
  BoundarySpec b;
  b.kind = Kind::WeakK;
  b.k = k;
  return b;
}

BoundarySpec BoundarySpec::custom(std::vector<double> inner_values) {
  for (double v : inner_values) require(std::isfinite(v), ErrorCode::InvalidInput, "non-finite boundary value");
  BoundarySpec b;
  b.kind = Kind::Custom;
  b.inner = std::move(inner_values);
  return b;
}

double BoundarySpec::inner_value(const SectorGrid& grid, std::size_t j) const {
  if (j + 1 == grid.n_phi()) return 0.0;
  if (kind == Kind::WeakK) return k * std::cos(grid.phi(j)) / grid.eps();
  require(inner.size() == grid.n_phi(), ErrorCode::InvalidInput, "custom boundary data does not match n_phi");
  return inner[j];
}

std::string BoundarySpec::describe() const {
  if (kind == Kind::WeakK) return "weak_k(" + Strength::finite(k).str() + ")";
  return "custom";
}

SolutionField initial_field(const SectorGrid& grid, const BoundarySpec& bc) {
  SolutionField f{grid, bc, std::vector<double>(grid.n_t() * grid.n_phi(), 0.0)};
  for (std::size_t j = 0; j + 1 < grid.n_phi(); ++j) {
    const double b = bc.inner_value(grid, j);
    f.at(0, j) = b;
    for (std::size_t i = 1; i + 1 < grid.n_t(); ++i) f.at(i, j) = b * grid.eps() / grid.r(i);
  }
  return f;
}

std::vector<double> assemble_residual(const SolutionField& field, const ProblemParams& params,
                                      const SectorGrid& grid, double reg) {
  params.validate();
  require(params.is_n_laplacian(), ErrorCode::Domain, "half-space residual requires p = N");
  require(field.u.size() == grid.n_t() * grid.n_phi(), ErrorCode::InvalidInput, "field does not match grid");
  for (double v : field.u) require(std::isfinite(v), ErrorCode::InvalidInput, "field contains non-finite values");
  const Scheme sc(params, grid, reg, false);
  const Layout L{grid.n_t(), grid.n_phi()};
  const Eigen::VectorXd R = scaled_residual(sc, L, field.u);
  std::vector<double> out(field.u.size(), 0.0);
  for (std::size_t i = 1; i + 1 < L.n_t; ++i)
    for (std::size_t j = 0; j + 1 < L.n_phi; ++j) out[i * L.n_phi + j] = R[L.index(i, j)] / sc.expNt[i];
  return out;
}

SolutionField solve_field(const ProblemParams& params, const SectorGrid& grid, const BoundarySpec& bc,
                          const SolveSettings& settings) {
  params.validate();
  require(params.is_n_laplacian(), ErrorCode::Domain, "half-space solve requires p = N");
  if (!settings.drop_absorption && params.q <= params.N - 1.0)
    fail(ErrorCode::IllPosed, "half-space problem is ill-posed for q <= N - 1");
  require(settings.tol_update > 0 && settings.max_newton > 0 && settings.damping > 0 && settings.damping <= 1 &&
              settings.reg_eps > 0 && settings.continuation_steps > 0,
          ErrorCode::InvalidInput, "invalid solve settings");
  if (bc.kind == BoundarySpec::Kind::WeakK && params.B == 0.0)
    require(bc.k >= 0.0, ErrorCode::Domain, "weak_k needs k >= 0");

  SolutionField field = initial_field(grid, bc);
  const Layout L{grid.n_t(), grid.n_phi()};
  const double scale = max_boundary_value(field);
  std::vector<double> history;
  double last_damping = settings.damping;

  if (scale == 0.0 && params.B == 0.0) {
    field.residual_norm = 0.0;
    return field;
  }

  if (params.N == 2) {
    const Scheme sc(params, grid, 0.0, settings.drop_absorption);
    newton(field, sc, L, settings, settings.tol_update, history, last_damping);
  } else {
    // Continuation from a strongly regularized diffusivity down to reg_eps.
    const int steps = settings.continuation_steps;
    const double hi = 1e-1, lo = settings.reg_eps;
    for (int s = 0; s < steps; ++s) {
      const double frac = steps == 1 ? 1.0 : static_cast<double>(s) / (steps - 1);
      const double reg = scale * std::pow(hi, 1.0 - frac) * std::pow(lo, frac);
      const Scheme sc(params, grid, reg, settings.drop_absorption);
      const double tol = (s + 1 == steps) ? settings.tol_update : std::max(settings.tol_update, 1e-6);
      newton(field, sc, L, settings, tol, history, last_damping);
    }
  }

  const double reg_final = params.N == 2 ? 0.0 : scale * settings.reg_eps;
  const Scheme sc(params, grid, reg_final, settings.drop_absorption);
  const Eigen::VectorXd R = scaled_residual(sc, L, field.u);
  double rn = 0.0;
  for (std::size_t i = 1; i + 1 < L.n_t; ++i)
    for (std::size_t j = 0; j + 1 < L.n_phi; ++j) rn = std::max(rn, std::abs(R[L.index(i, j)]) / sc.expNt[i]);
  field.residual_norm = rn;
  return field;
}

double probe_at(const SolutionField& field, double r, std::size_t j) {
  require(j < field.grid.n_phi(), ErrorCode::InvalidInput, "phi index out of range");
  return lagrange4(field, r, j);
}

double probe_max(const SolutionField& field, double r) {
  double m = -INFINITY;
  for (std::size_t j = 0; j < field.grid.n_phi(); ++j) m = std::max(m, lagrange4(field, r, j));
  return m;
}

StrongFamilyReport strong_family(const ProblemParams& params, const SectorGrid& grid,
                                 const std::vector<double>& k_list, const std::vector<double>& probe_r,
                                 const SolveSettings& settings, std::optional<double> omega0) {
  params.require_subcritical();
  require(!k_list.empty() && !probe_r.empty(), ErrorCode::InvalidInput, "k_list and probe_r must be non-empty");
  for (std::size_t i = 1; i < k_list.size(); ++i)
    require(k_list[i] > k_list[i - 1], ErrorCode::InvalidInput, "k_list must be increasing");
  const double beta = exponents::beta_q(params);

  StrongFamilyReport rep;
  rep.k_list = k_list;
  rep.probe_r = probe_r;
  rep.omega0 = omega0;
  for (double k : k_list) {
    SolutionField f = solve_field(params, grid, BoundarySpec::weak_k(k), settings);
    std::vector<double> row;
    for (double r : probe_r) row.push_back(std::pow(r, beta) * probe_max(f, r));
    rep.s.push_back(std::move(row));
    rep.fields.push_back(std::move(f));
  }
  for (std::size_t a = 1; a < rep.s.size(); ++a)
    for (std::size_t p = 0; p < probe_r.size(); ++p) rep.increasing = rep.increasing && rep.s[a][p] > rep.s[a - 1][p];
  if (rep.s.size() >= 2) {
    double inc = 0.0;
    const auto& last = rep.s.back();
    const auto& prev = rep.s[rep.s.size() - 2];
    for (std::size_t p = 0; p < probe_r.size(); ++p) inc = std::max(inc, (last[p] - prev[p]) / std::abs(last[p]));
    rep.last_increment = inc;
    rep.saturating = inc <= 0.10;
    if (omega0) {
      bool near = true;
      for (double v : last) near = near && std::abs(v - *omega0) <= 0.10 * *omega0;
      rep.near_profile = near;
    }
  }
  return rep;
}

TrendReport removability_experiment(const ProblemParams& params, double k, const std::vector<double>& eps_list,
                                    double probe_r, double R_out, double ht, std::size_t n_phi,
                                    const SolveSettings& settings) {
  params.require_profile_range();
  require(!eps_list.empty(), ErrorCode::InvalidInput, "eps_list must be non-empty");
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    require(eps_list[i] < eps_list[i - 1], ErrorCode::InvalidInput, "eps_list must be decreasing");
  require(probe_r >= 10.0 * eps_list.front(), ErrorCode::InvalidInput, "probe_r must be >= 10 max(eps)");
  require(probe_r < R_out, ErrorCode::InvalidInput, "probe_r must lie inside the sector");

  TrendReport rep;
  rep.params = params;
  rep.k = k;
  rep.probe_r = probe_r;
  rep.eps_list = eps_list;
  for (double eps : eps_list) {
    const SectorGrid g = SectorGrid::with_spacing(eps, R_out, ht, n_phi);
    const SolutionField f = solve_field(params, g, BoundarySpec::weak_k(k), settings);
    rep.values.push_back(probe_max(f, probe_r));
  }
  for (std::size_t i = 1; i < rep.values.size(); ++i) {
    rep.ratios.push_back(rep.values[i - 1] / rep.values[i]);
    rep.fit_slopes.push_back(std::log(rep.values[i - 1] / rep.values[i]) / std::log(eps_list[i - 1] / eps_list[i]));
  }

  const double qc = exponents::critical_q(params.N);
  if (rep.values.size() < 2 || params.q == qc) {
    rep.verdict = "none";
  } else if (params.q > qc) {
    const std::size_t n = rep.ratios.size();
    bool ok = true;
    for (std::size_t i = n >= 2 ? n - 2 : 0; i < n; ++i) ok = ok && rep.ratios[i] >= 1.2;
    rep.verdict = ok ? "decreasing" : "not-decreasing";
    rep.pass = ok;
  } else {
    const double a = rep.values[rep.values.size() - 2], b = rep.values.back();
    const bool ok = b > 0.0 && std::abs(b - a) <= 0.02 * std::abs(b);
    rep.verdict = ok ? "stable" : "not-stable";
    rep.pass = ok;
  }
  return rep;
}

BoundDiagnostics bound_diagnostics(const SolutionField& field, const ProblemParams& params) {
  params.require_profile_range();
  const SectorGrid& g = field.grid;
  const double N = params.N, q = params.q;
  BoundDiagnostics d;
  for (std::size_t i = 0; i < g.n_t(); ++i) {
    const double r = g.r(i);
    for (std::size_t j = 0; j < g.n_phi(); ++j) {
      const double u = std::max(field.at(i, j), 0.0);
      const double lam = params.A * std::pow(r, N) * std::pow(u, q + 1.0 - N);
      if (lam > d.lambda_hat) {
        d.lambda_hat = lam;
        d.lambda_i = i;
        d.lambda_j = j;
      }
      const double rho = r * std::cos(g.phi(j));
      if (j + 1 == g.n_phi() || rho <= 0.0) continue;
      const double C = u * std::pow(params.A * std::pow(r, q + 1.0), 1.0 / (q + 1.0 - N)) / rho;
      if (C > d.C_hat) {
        d.C_hat = C;
        d.C_i = i;
        d.C_j = j;
      }
    }
  }
  return d;
}

void write_field_csv(std::ostream& os, const SolutionField& field) {
  const SectorGrid& g = field.grid;
  os << "t,r,phi,u\n";
  char buf[160];
  for (std::size_t i = 0; i < g.n_t(); ++i) {
    for (std::size_t j = 0; j < g.n_phi(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", g.t(i), g.r(i), g.phi(j), field.at(i, j));
      os << buf;
    }
  }
}

SolutionField read_field_csv(std::istream& is) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), ErrorCode::Io, "empty field CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == "t,r,phi,u", ErrorCode::InvalidInput, "field CSV header must be t,r,phi,u");
  std::vector<double> ts, rs, phis, us;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    double v[4];
    std::istringstream ls(line);
    for (int c = 0; c < 4; ++c) {
      std::string cell;
      require(static_cast<bool>(std::getline(ls, cell, ',')), ErrorCode::InvalidInput, "short row in field CSV");
      try {
        v[c] = std::stod(cell);
      } catch (const std::exception&) {
        fail(ErrorCode::InvalidInput, "unparsable number in field CSV: " + cell);
      }
    }
    ts.push_back(v[0]);
    rs.push_back(v[1]);
    phis.push_back(v[2]);
    us.push_back(v[3]);
  }
  require(!ts.empty(), ErrorCode::InvalidInput, "field CSV has no rows");
  std::size_t n_phi = 1;
  while (n_phi < ts.size() && ts[n_phi] == ts[0]) ++n_phi;
  require(ts.size() % n_phi == 0, ErrorCode::InvalidInput, "field CSV is not a rectangular grid");
  const std::size_t n_t = ts.size() / n_phi;
  SectorGrid g(rs.front(), rs.back(), n_t, n_phi);
  SolutionField f = initial_field(g, BoundarySpec::custom(std::vector<double>(us.begin(), us.begin() + n_phi)));
  f.u = us;
  return f;
}

namespace {

nlohmann::json params_json(const ProblemParams& p) {
  return {{"N", p.N}, {"p", p.p}, {"q", p.q}, {"A", p.A}, {"B", p.B}};
}

}  // namespace

std::string trend_json(const TrendReport& rep) {
  nlohmann::json j;
  j["params"] = params_json(rep.params);
  j["params"]["k"] = rep.k;
  j["probes"] = {{"r", rep.probe_r}, {"eps", rep.eps_list}};
  j["values"] = rep.values;
  j["verdict"] = rep.verdict;
  j["fit_slopes"] = rep.fit_slopes;
  j["ratios"] = rep.ratios;
  return j.dump(2);
}

std::string strong_family_json(const StrongFamilyReport& rep, const ProblemParams& params) {
  nlohmann::json j;
  j["params"] = params_json(params);
  j["params"]["k_list"] = rep.k_list;
  j["probes"] = {{"r", rep.probe_r}};
  j["values"] = rep.s;
  std::string verdict = "none";
  if (rep.saturating) verdict = (*rep.saturating && rep.increasing) ? "saturating" : "not-saturating";
  j["verdict"] = verdict;
  j["fit_slopes"] = nlohmann::json::array();
  if (rep.omega0) j["omega0"] = *rep.omega0;
  if (rep.last_increment) j["last_increment"] = *rep.last_increment;
  j["increasing"] = rep.increasing;
  return j.dump(2);
}

}  // namespace bsl::halfspace
