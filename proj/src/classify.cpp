#include "bsl/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bsl/exponents.hpp"
#include "json.hpp"

namespace bsl::classify {

namespace {

std::vector<std::size_t> window_nodes(const SolutionField& f, const Window& w) {
  const auto& g = f.grid;
  require(w.r_lo > 0.0 && w.r_hi > w.r_lo, ErrorCode::InvalidInput, "window needs 0 < r_lo < r_hi");
  require(w.r_hi / w.r_lo >= 10.0 * (1.0 - 1e-9), ErrorCode::InvalidInput, "window must span at least one decade");
  require(w.r_lo >= g.eps() * (1.0 - 1e-9) && w.r_hi <= g.R_out() * (1.0 + 1e-9), ErrorCode::InvalidInput,
          "window outside the field's radial range");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < g.n_t(); ++i) {
    const double r = g.r(i);
    if (r >= w.r_lo * (1.0 - 1e-9) && r <= w.r_hi * (1.0 + 1e-9)) idx.push_back(i);
  }
  require(idx.size() >= 3, ErrorCode::InvalidInput, "window contains fewer than 3 grid radii");
  return idx;
}

double ring_max(const SolutionField& f, std::size_t i) {
  double m = -INFINITY;
  for (std::size_t j = 0; j < f.grid.n_phi(); ++j) m = std::max(m, f.at(i, j));
  return m;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

bool vanishes(const SolutionField& f, const std::vector<std::size_t>& nodes) {
  for (std::size_t i : nodes)
    for (std::size_t j = 0; j < f.grid.n_phi(); ++j)
      if (f.at(i, j) != 0.0) return false;
  return true;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Removable: return "Removable";
    case Verdict::Weak: return "Weak";
    case Verdict::Strong: return "Strong";
  }
  return "?";
}

Window default_window(const SolutionField& field) {
  const Window w{10.0 * field.grid.eps(), field.grid.R_out() / 10.0};
  require(w.r_hi / w.r_lo >= 10.0 * (1.0 - 1e-9), ErrorCode::InvalidInput,
          "default window needs R_out / eps >= 1000; pass an explicit window");
  return w;
}

double fit_exponent(const SolutionField& field, const Window& window) {
  std::vector<double> x, y;
  for (std::size_t i : window_nodes(field, window)) {
    const double m = ring_max(field, i);
    require(m > 0.0 && std::isfinite(m), ErrorCode::DegenerateFit, "max_phi u is not positive on the window");
    x.push_back(std::log(field.grid.r(i)));
    y.push_back(std::log(m));
  }
  return ls_slope(x, y);
}

KEstimate estimate_k(const SolutionField& field, const Window& window, double phi_margin) {
  const auto& g = field.grid;
  const double cap = std::numbers::pi / 2 - phi_margin;
  KEstimate est;
  std::vector<double> lr, lk;
  for (std::size_t i : window_nodes(field, window)) {
    double m = -INFINITY;
    for (std::size_t j = 0; j < g.n_phi() && g.phi(j) <= cap; ++j)
      m = std::max(m, field.at(i, j) * g.r(i) / std::cos(g.phi(j)));
    require(m > 0.0 && std::isfinite(m), ErrorCode::DegenerateFit, "u r / cos(phi) is not positive on the window");
    est.r.push_back(g.r(i));
    est.ring.push_back(m);
    lr.push_back(std::log(g.r(i)));
    lk.push_back(std::log(m));
  }
  est.k_hat = *std::max_element(est.ring.begin(), est.ring.end());
  est.trend = std::pow(10.0, -ls_slope(lr, lk));
  return est;
}

double harnack_check(const SolutionField& field, const std::vector<double>& r_values, double margin) {
  require(!r_values.empty(), ErrorCode::InvalidInput, "harnack_check needs at least one radius");
  const auto& g = field.grid;
  const double cap = std::numbers::pi / 2 - margin;
  double c = 1.0;
  for (double r : r_values) {
    double lo = INFINITY, hi = 0.0;
    for (std::size_t j = 0; j < g.n_phi() && g.phi(j) <= cap; ++j) {
      const double u = halfspace::probe_at(field, r, j);
      require(u > 0.0, ErrorCode::DegenerateFit, "harnack_check needs a positive field");
      const double v = u / (r * std::cos(g.phi(j)));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    c = std::max(c, hi / lo);
  }
  return c;
}

Classification classify(const SolutionField& field, const ProblemParams& params, const Window& window,
                        const Thresholds& th) {
  params.require_profile_range();
  Classification c;
  c.window = window;
  const auto nodes = window_nodes(field, window);
  if (vanishes(field, nodes)) {
    c.verdict = Verdict::Removable;
    c.slope_fit = 0.0;
    c.note = "field vanishes on the window";
    return c;
  }
  c.slope_fit = fit_exponent(field, window);
  const auto est = estimate_k(field, window, th.phi_margin);
  c.k_estimate = est.k_hat;
  c.trend = est.trend;
  c.harnack_c = harnack_check(field, {window.r_lo, std::sqrt(window.r_lo * window.r_hi), window.r_hi},
                              th.harnack_margin);

  // ring maxima may not grow faster than the removable slope allows
  const double outer = ring_max(field, nodes.back());
  for (std::size_t i : nodes)
    c.bounded = c.bounded && std::isfinite(ring_max(field, i)) &&
                ring_max(field, i) <= 1.1 * outer * std::pow(field.grid.r(nodes.back()) / field.grid.r(i), -th.removable_slope);

  const double beta = exponents::beta_q(params);
  const bool strong = std::abs(c.slope_fit + beta) <= th.slope_band && c.trend >= th.strong_trend_min;
  const bool weak = std::abs(c.slope_fit + 1.0) <= th.slope_band && std::abs(c.trend - 1.0) <= th.weak_trend_tol;
  const bool removable = c.slope_fit >= th.removable_slope && c.bounded;
  const int hits = int(strong) + int(weak) + int(removable);

  std::ostringstream diag;
  diag << "slope " << c.slope_fit << ", k trend " << c.trend << " per decade, beta_q " << beta;
  if (hits != 1) {
    c.note = diag.str();
    throw AmbiguousError((hits == 0 ? "no verdict band matches: " : "verdict bands overlap: ") + diag.str(), c);
  }
  if (weak) {
    c.verdict = Verdict::Weak;
    c.k_hat = est.k_hat;
  } else {
    c.verdict = strong ? Verdict::Strong : Verdict::Removable;
  }
  return c;
}

Classification classify(const SolutionField& field, const ProblemParams& params) {
  return classify(field, params, default_window(field));
}

SolutionField rescale(const SolutionField& field, double r0, double amplitude) {
  require(r0 > 0.0 && std::isfinite(r0), ErrorCode::InvalidInput, "rescale factor must be positive");
  const auto& g = field.grid;
  SolutionField out = field;
  out.grid = halfspace::SectorGrid(g.eps() / r0, g.R_out() / r0, g.n_t(), g.n_phi());
  const double f = std::pow(r0, amplitude);
  for (double& v : out.u) v *= f;
  out.bc = halfspace::BoundarySpec::custom(std::vector<double>(out.u.begin(), out.u.begin() + g.n_phi()));
  return out;
}

std::string classification_json(const Classification& c, const ProblemParams& params) {
  nlohmann::json j;
  j["params"] = {{"N", params.N}, {"p", params.p}, {"q", params.q}, {"A", params.A}, {"B", params.B}};
  j["verdict"] = c.verdict ? to_string(*c.verdict) : "Ambiguous";
  j["slope_fit"] = c.slope_fit;
  j["k_hat"] = c.k_hat ? nlohmann::json(*c.k_hat) : nlohmann::json(nullptr);
  j["k_estimate"] = c.k_estimate;
  j["trend_per_decade"] = c.trend;
  j["harnack_c"] = c.harnack_c;
  j["bounded"] = c.bounded;
  j["window"] = {c.window.r_lo, c.window.r_hi};
  if (!c.note.empty()) j["note"] = c.note;
  return j.dump(2);
}

}  // namespace bsl::classify
