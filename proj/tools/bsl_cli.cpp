// Command-line front end: bsl <command> [flags]. See README.md for the command list.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "bsl/acceptance.hpp"
#include "bsl/classify.hpp"
#include "bsl/errors.hpp"
#include "bsl/exponents.hpp"
#include "bsl/halfspace_pde.hpp"
#include "bsl/sphere_ode.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bsl;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kComputation = 1, kUsage = 2, kAcceptance = 3 };

/// Resolved flag values. Numeric lists stay strings until a command parses them.
struct RunConfig {
  std::string N = "2", q, k = "1", eps;
  std::optional<double> p, A, R, tol;
  std::string grid, out, format = "json", config, field, window, suite = "all", task = "solve";
  int jobs = 1;
  long long seed = 1;
  double probe = 0.1, ht = 0.02;
  int halvings = 4, nphi = 129;
};

/// Errors raised while checking flags, before any computation.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void usage(const std::string& msg) { throw UsageError(msg); }

double parse_double(const std::string& s, const char* flag) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    usage(std::string("--") + flag + ": not a number: '" + s + "'");
  }
}

/// "a:b:s" (inclusive), "v1,v2,..." or a single value.
std::vector<double> parse_list(const std::string& s, const char* flag) {
  if (s.empty()) usage(std::string("--") + flag + " is required");
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(parse_double(item, flag));
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
      usage(std::string("--") + flag + ": range must be start:stop:step with step > 0");
    const double n = std::floor((parts[1] - parts[0]) / parts[2] + 1e-9);
    for (int i = 0; i <= static_cast<int>(n); ++i) out.push_back(parts[0] + i * parts[2]);
    return out;
  }
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_double(item, flag));
  return out;
}

double parse_single(const std::string& s, const char* flag) {
  const auto v = parse_list(s, flag);
  if (v.size() != 1) usage(std::string("--") + flag + " takes a single value for this command");
  return v.front();
}

int parse_N(const std::string& s) {
  const double v = parse_single(s, "N");
  if (v != std::floor(v) || v < 2 || v > 16) usage("--N must be an integer in [2, 16]");
  return static_cast<int>(v);
}

std::pair<std::size_t, std::size_t> parse_grid(const std::string& s, std::size_t w, std::size_t h) {
  if (s.empty()) return {w, h};
  const auto x = s.find('x');
  if (x == std::string::npos) usage("--grid must be WxH");
  const double a = parse_double(s.substr(0, x), "grid"), b = parse_double(s.substr(x + 1), "grid");
  if (a < 2 || b < 2 || a != std::floor(a) || b != std::floor(b)) usage("--grid needs positive integer sizes");
  return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
}

std::size_t parse_points(const std::string& s, std::size_t def) {
  if (s.empty()) return def;
  const double v = parse_double(s, "grid");
  if (v < 11 || v != std::floor(v)) usage("--grid for 1-D commands is a single node count >= 11");
  return static_cast<std::size_t>(v);
}

ProblemParams params_from(const RunConfig& c, bool need_q = true) {
  ProblemParams pp = ProblemParams::n_laplacian(parse_N(c.N), need_q ? parse_single(c.q, "q") : 0.0);
  if (c.p) pp.p = *c.p;
  if (c.A) pp.A = *c.A;
  return pp;
}

/// Runs a validation step, turning library errors into usage errors.
template <class F>
auto validated(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    usage(e.what());
  }
}

json params_json(const ProblemParams& p) { return {{"N", p.N}, {"p", p.p}, {"q", p.q}, {"A", p.A}, {"B", p.B}}; }

std::string utc_timestamp() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

json config_json(const RunConfig& c) {
  json j;
  j["N"] = c.N;
  j["q"] = c.q;
  j["k"] = c.k;
  j["eps"] = c.eps;
  j["p"] = c.p ? json(*c.p) : json(nullptr);
  j["A"] = c.A ? json(*c.A) : json(nullptr);
  j["R"] = c.R ? json(*c.R) : json(nullptr);
  j["tol"] = c.tol ? json(*c.tol) : json(nullptr);
  j["grid"] = c.grid;
  j["format"] = c.format;
  j["jobs"] = c.jobs;
  j["seed"] = c.seed;
  j["field"] = c.field;
  j["window"] = c.window;
  j["suite"] = c.suite;
  j["task"] = c.task;
  j["probe"] = c.probe;
  j["ht"] = c.ht;
  j["halvings"] = c.halvings;
  j["nphi"] = c.nphi;
  return j;
}

/// Collects output files and writes them plus manifest.json when --out is set.
class Output {
 public:
  Output(const RunConfig& c, std::string command) : cfg_(c), command_(std::move(command)) {}

  bool to_dir() const { return !cfg_.out.empty(); }

  void file(const std::string& name, const std::string& content) {
    if (!to_dir()) return;
    fs::create_directories(cfg_.out);
    std::ofstream os(fs::path(cfg_.out) / name, std::ios::binary);
    if (!os) fail(ErrorCode::Io, "cannot write " + (fs::path(cfg_.out) / name).string());
    os << content;
    files_.push_back(name);
  }

  void finish(const std::string& status) {
    if (!to_dir()) return;
    json m;
    m["command"] = command_;
    m["version"] = kVersion;
    m["config"] = config_json(cfg_);
    m["files"] = files_;
    m["status"] = status;
    m["timestamp"] = utc_timestamp();
    fs::create_directories(cfg_.out);
    std::ofstream os(fs::path(cfg_.out) / "manifest.json", std::ios::binary);
    if (!os) fail(ErrorCode::Io, "cannot write manifest");
    os << m.dump(2) << "\n";
  }

 private:
  const RunConfig& cfg_;
  std::string command_;
  std::vector<std::string> files_;
};

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string kv_csv(const json& j) {
  std::string s = "key,value\n";
  for (const auto& [key, val] : j.items()) {
    if (val.is_number_float()) s += key + "," + g17(val.get<double>()) + "\n";
    else if (val.is_string()) s += key + "," + val.get<std::string>() + "\n";
    else if (!val.is_object() && !val.is_array()) s += key + "," + val.dump() + "\n";
  }
  return s;
}

void emit(const RunConfig& c, Output& out, const std::string& stem, const json& report) {
  const std::string text = c.format == "csv" ? kv_csv(report) : report.dump(2) + "\n";
  out.file(stem + (c.format == "csv" ? ".csv" : ".json"), text);
  std::cout << text;
}

int cmd_exponents(const RunConfig& c) {
  const auto pp = params_from(c);
  const auto t = validated([&] {
    pp.validate();
    require(pp.q > pp.N - 1.0, ErrorCode::Domain, "q must exceed N - 1 (got q = " + g17(pp.q) + ")");
    return exponents::exponent_table(pp);
  });
  json j;
  j["N"] = t.N;
  j["p"] = t.p;
  j["q"] = t.q;
  j["beta_q"] = t.beta_q;
  j["q_c"] = t.q_c;
  j["Lambda"] = t.lambda_sep;
  j["const"] = t.const_solution;
  j["scaling_exp"] = t.scaling_exp ? json(*t.scaling_exp) : json(nullptr);
  j["beta_pq"] = t.beta_pq ? json(*t.beta_pq) : json(nullptr);
  j["lambda_pq"] = t.lambda_pq ? json(*t.lambda_pq) : json(nullptr);
  j["beta2"] = t.beta2;
  j["kv_root"] = t.kv_root;
  j["critical"] = t.critical;
  if (t.critical) j["note"] = "q = q_c: critical";
  else if (t.q > t.q_c) j["note"] = "q > q_c: supercritical, isolated boundary singularities are removable";
  Output out(c, "exponents");
  emit(c, out, "exponents", j);
  out.finish("ok");
  return kOk;
}

sphere::ShootSettings shoot_settings(const RunConfig& c) {
  sphere::ShootSettings s;
  if (c.tol) s.tol_boundary = *c.tol;
  return s;
}

int cmd_profile(const RunConfig& c) {
  const auto pp = params_from(c);
  const std::size_t M = parse_points(c.grid, 2001);
  validated([&] { pp.require_subcritical(); return 0; });
  const auto prof = sphere::solve_profile(pp, sphere::SphericalGrid(M), shoot_settings(c));
  Output out(c, "profile");
  std::ostringstream csv;
  sphere::write_profile_csv(csv, prof);
  out.file("profile.csv", csv.str());
  json j{{"params", params_json(pp)}, {"M", M}, {"beta", prof.beta}, {"omega0", prof.lambda0},
         {"residual_norm", prof.residual_norm}};
  if (c.format == "csv") {
    std::cout << csv.str();
    out.file("profile_summary.json", j.dump(2) + "\n");
  } else {
    emit(c, out, "profile_summary", j);
  }
  out.finish("ok");
  return kOk;
}

int cmd_spectral(const RunConfig& c) {
  const int N = parse_N(c.N);
  const double p = c.p.value_or(N);
  const std::size_t M = parse_points(c.grid, 2001);
  if (!(p > 1.0)) usage("--p must exceed 1");
  const auto s = sphere::solve_spectral(p, N, sphere::SphericalGrid(M), shoot_settings(c));
  Output out(c, "spectral");
  std::ostringstream csv;
  sphere::write_profile_csv(csv, s.profile);
  out.file("spectral.csv", csv.str());
  json j{{"N", N}, {"p", p}, {"M", M}, {"beta", s.beta}, {"lambda", s.lambda}, {"residual_norm", s.profile.residual_norm}};
  if (c.format == "csv") {
    std::cout << csv.str();
    out.file("spectral_summary.json", j.dump(2) + "\n");
  } else {
    emit(c, out, "spectral_summary", j);
  }
  out.finish("ok");
  return kOk;
}

halfspace::SolveSettings solve_settings(const RunConfig& c) {
  halfspace::SolveSettings s;
  if (c.tol) s.tol_update = *c.tol;
  return s;
}

json solve_report(const ProblemParams& pp, double k, const halfspace::SolutionField& f) {
  const auto& g = f.grid;
  double excess = -INFINITY;
  for (std::size_t i = 0; i < g.n_t(); ++i)
    for (std::size_t j = 0; j < g.n_phi(); ++j) excess = std::max(excess, f.at(i, j) - k * std::cos(g.phi(j)) / g.r(i));
  const auto bd = halfspace::bound_diagnostics(f, pp);
  json j;
  j["params"] = params_json(pp);
  j["params"]["k"] = k;
  j["grid"] = {{"eps", g.eps()}, {"R", g.R_out()}, {"n_t", g.n_t()}, {"n_phi", g.n_phi()}};
  j["iters"] = f.iters;
  j["picard_steps"] = f.picard_steps;
  j["final_update_norm"] = f.final_update_norm;
  j["residual_norm"] = f.residual_norm;
  j["supersolution_excess"] = excess;
  j["lambda_hat"] = bd.lambda_hat;
  j["C_hat"] = bd.C_hat;
  if (g.R_out() / g.eps() >= 10.0) {
    const classify::Window w{std::max(10.0 * g.eps(), g.R_out() / 100.0), g.R_out() / 10.0};
    if (w.r_hi / w.r_lo >= 10.0 * (1 - 1e-9)) {
      try {
        const auto est = classify::estimate_k(f, w);
        j["k_estimate"] = {{"window", {w.r_lo, w.r_hi}}, {"k_hat", est.k_hat}, {"trend_per_decade", est.trend}};
      } catch (const Error&) {
        j["k_estimate"] = nullptr;
      }
    }
  }
  return j;
}

int cmd_solve(const RunConfig& c) {
  const auto pp = params_from(c);
  const double k = parse_single(c.k, "k");
  const double eps = c.eps.empty() ? 1e-3 : parse_single(c.eps, "eps");
  const double R = c.R.value_or(1.0);
  const auto [nt, np] = parse_grid(c.grid, 257, 129);
  const auto grid = validated([&] {
    pp.require_profile_range();
    require(k >= 0.0, ErrorCode::Domain, "--k must be >= 0");
    return halfspace::SectorGrid(eps, R, nt, np);
  });
  const auto f = halfspace::solve_field(pp, grid, halfspace::BoundarySpec::weak_k(k), solve_settings(c));
  Output out(c, "solve");
  std::ostringstream csv;
  halfspace::write_field_csv(csv, f);
  out.file("field.csv", csv.str());
  const json rep = solve_report(pp, k, f);
  if (c.format == "csv") {
    std::cout << csv.str();
    out.file("report.json", rep.dump(2) + "\n");
  } else {
    emit(c, out, "report", rep);
  }
  out.finish("ok");
  return kOk;
}

int cmd_removability(const RunConfig& c) {
  const auto pp = params_from(c);
  const double k = parse_single(c.k, "k");
  const double eps0 = c.eps.empty() ? 1e-2 : parse_single(c.eps, "eps");
  if (c.halvings < 0 || c.halvings > 12) usage("--halvings must be in [0, 12]");
  std::vector<double> eps{eps0};
  for (int i = 0; i < c.halvings; ++i) eps.push_back(eps.back() / 2);
  validated([&] { pp.require_profile_range(); return 0; });
  const auto rep = halfspace::removability_experiment(pp, k, eps, c.probe, c.R.value_or(1.0), c.ht,
                                                      static_cast<std::size_t>(c.nphi), solve_settings(c));
  Output out(c, "removability");
  const json j = json::parse(halfspace::trend_json(rep));
  out.file("removability.json", j.dump(2) + "\n");
  if (c.format == "csv") {
    std::string s = "eps,value\n";
    for (std::size_t i = 0; i < rep.eps_list.size(); ++i) s += g17(rep.eps_list[i]) + "," + g17(rep.values[i]) + "\n";
    out.file("removability.csv", s);
    std::cout << s;
  } else {
    std::cout << j.dump(2) << "\n";
  }
  out.finish("ok");
  return kOk;
}

int cmd_classify(const RunConfig& c) {
  if (c.field.empty()) usage("classify needs --field FILE");
  const auto pp = params_from(c);
  validated([&] { pp.require_profile_range(); return 0; });
  std::ifstream is(c.field);
  if (!is) fail(ErrorCode::Io, "cannot open " + c.field);
  const auto f = halfspace::read_field_csv(is);
  std::optional<classify::Window> win;
  if (!c.window.empty()) {
    const auto v = parse_list(c.window, "window");
    if (v.size() != 2) usage("--window must be r_lo,r_hi");
    win = classify::Window{v[0], v[1]};
  }
  Output out(c, "classify");
  try {
    const auto res = win ? classify::classify(f, pp, *win) : classify::classify(f, pp);
    const std::string text = classify::classification_json(res, pp) + "\n";
    out.file("classification.json", text);
    std::cout << text;
    out.finish("ok");
    return kOk;
  } catch (const classify::AmbiguousError& e) {
    const std::string text = classify::classification_json(e.diagnostics(), pp) + "\n";
    out.file("classification.json", text);
    std::cout << text;
    out.finish("ambiguous");
    throw;
  }
}

struct SweepPoint {
  int N;
  double q, k, eps;
};

struct SweepRecord {
  std::string status = "ok";
  json metrics = json::object();
};

SweepRecord run_point(const RunConfig& c, const SweepPoint& pt) {
  SweepRecord rec;
  try {
    auto pp = ProblemParams::n_laplacian(pt.N, pt.q);
    if (c.A) pp.A = *c.A;
    rec.metrics["beta_q"] = exponents::beta_q(pp);
    if (c.task == "profile") {
      const auto prof = sphere::solve_profile(pp, sphere::SphericalGrid(parse_points(c.grid, 1001)), shoot_settings(c));
      rec.metrics["omega0"] = prof.lambda0;
      rec.metrics["residual_norm"] = prof.residual_norm;
    } else {
      const auto [nt, np] = parse_grid(c.grid, 257, 129);
      const auto f = halfspace::solve_field(pp, halfspace::SectorGrid(pt.eps, c.R.value_or(1.0), nt, np),
                                            halfspace::BoundarySpec::weak_k(pt.k), solve_settings(c));
      const json rep = solve_report(pp, pt.k, f);
      rec.metrics["iters"] = rep["iters"];
      rec.metrics["supersolution_excess"] = rep["supersolution_excess"];
      rec.metrics["k_hat"] = rep.contains("k_estimate") && !rep["k_estimate"].is_null() ? rep["k_estimate"]["k_hat"] : json(nullptr);
    }
  } catch (const Error& e) {
    rec.status = std::string("error ") + std::string(to_string(e.code())) + ": " + e.what();
  }
  return rec;
}

int cmd_sweep(const RunConfig& c) {
  if (c.task != "solve" && c.task != "profile") usage("--task must be solve or profile");
  if (c.jobs < 1) usage("--jobs must be >= 1");
  std::vector<SweepPoint> pts;
  const auto Ns = parse_list(c.N, "N");
  for (double n : Ns)
    if (n != std::floor(n) || n < 2 || n > 16) usage("--N values must be integers in [2, 16]");
  for (double n : Ns)
    for (double q : parse_list(c.q, "q"))
      for (double k : parse_list(c.k, "k"))
        for (double e : c.eps.empty() ? std::vector<double>{1e-3} : parse_list(c.eps, "eps"))
          pts.push_back({static_cast<int>(n), q, k, e});

  std::vector<SweepRecord> recs(pts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < pts.size();) recs[i] = run_point(c, pts[i]);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::min<int>(c.jobs, static_cast<int>(pts.size())); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  json arr = json::array();
  std::string csv = "id,N,q,k,eps,status,metric,value\n";
  int failed = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    failed += recs[i].status == "ok" ? 0 : 1;
    arr.push_back({{"id", i}, {"N", p.N}, {"q", p.q}, {"k", p.k}, {"eps", p.eps}, {"status", recs[i].status},
                   {"metrics", recs[i].metrics}});
    const std::string head = std::to_string(i) + "," + std::to_string(p.N) + "," + g17(p.q) + "," + g17(p.k) + "," +
                             g17(p.eps) + ",\"" + recs[i].status + "\",";
    if (recs[i].metrics.empty()) csv += head + ",\n";
    for (const auto& [key, val] : recs[i].metrics.items())
      csv += head + key + "," + (val.is_number_float() ? g17(val.get<double>()) : val.dump()) + "\n";
  }
  Output out(c, "sweep");
  out.file("sweep.json", arr.dump(2) + "\n");
  out.file("sweep.csv", csv);
  std::cout << (c.format == "csv" ? csv : arr.dump(2) + "\n");
  out.finish(failed == 0 ? "ok" : std::to_string(failed) + " point(s) failed");
  if (failed) {
    std::cerr << "error NON_CONVERGENCE: " << failed << " of " << pts.size() << " sweep points failed\n";
    return kComputation;
  }
  return kOk;
}

int cmd_verify(const RunConfig& c) {
  const auto ids = validated([&] { return acceptance::suite_ids(c.suite); });
  json arr = json::array();
  int failed = 0;
  for (int id : ids) {
    const auto r = acceptance::run(id);
    std::cout << acceptance::format_line(r) << std::endl;
    failed += r.pass ? 0 : 1;
    arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  }
  Output out(c, "verify");
  out.file("verify.json", arr.dump(2) + "\n");
  out.finish(failed == 0 ? "ok" : std::to_string(failed) + " criterion(s) failed");
  return failed == 0 ? kOk : kAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary singularities of -div(|Du|^{N-2}Du) + A|u|^{q-1}u = 0: exponents, profiles, half-space solves"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  RunConfig cfg;

  app.add_option("--N", cfg.N, "dimension (sweep: list or a:b:s)");
  app.add_option("--p", cfg.p, "p of the p-Laplacian (default N)");
  app.add_option("--q", cfg.q, "absorption exponent (sweep: list or a:b:s)");
  app.add_option("--A", cfg.A, "absorption coefficient (default 1)");
  app.add_option("--k", cfg.k, "weak singularity strength (default 1)");
  app.add_option("--eps", cfg.eps, "inner radius of the sector");
  app.add_option("--R", cfg.R, "outer radius of the sector (default 1)");
  app.add_option("--grid", cfg.grid, "WxH sector grid (n_t x n_phi), or a node count for 1-D commands");
  app.add_option("--tol", cfg.tol, "solver tolerance");
  app.add_option("--out", cfg.out, "output directory (files + manifest.json)");
  app.add_option("--format", cfg.format, "stdout format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--jobs", cfg.jobs, "concurrent sweep points");
  app.add_option("--seed", cfg.seed, "seed for sampled scans");
  app.set_config("--config", "", "flat key=value file; flags override it");

  auto* exps = app.add_subcommand("exponents", "exponent table for (N, q[, p])");
  auto* prof = app.add_subcommand("profile", "hemisphere profile of the strong singularity");
  auto* spec = app.add_subcommand("spectral", "exponent of positive p-harmonic functions singular at a boundary point");
  auto* solve = app.add_subcommand("solve", "weak_k solve on a half-space sector");
  auto* remv = app.add_subcommand("removability", "probe values as the inner radius shrinks");
  remv->add_option("--probe", cfg.probe, "probe radius (default 0.1)");
  remv->add_option("--halvings", cfg.halvings, "number of eps halvings (default 4)");
  remv->add_option("--ht", cfg.ht, "t = ln r spacing (default 0.02)");
  remv->add_option("--nphi", cfg.nphi, "phi nodes (default 129)");
  auto* cls = app.add_subcommand("classify", "classify a field CSV near r = 0");
  cls->add_option("--field", cfg.field, "field CSV written by solve");
  cls->add_option("--window", cfg.window, "r_lo,r_hi (default [10 eps, R/10])");
  auto* sweep = app.add_subcommand("sweep", "run solve or profile over a parameter grid");
  sweep->add_option("--task", cfg.task, "solve (default) or profile");
  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
  verify->add_option("--suite", cfg.suite, "all or one criterion group");
  for (auto* s : {exps, prof, spec, solve, remv, cls, sweep, verify}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "error USAGE: " << msg << "\n";
    return kUsage;
  }

  try {
    if (*exps) return cmd_exponents(cfg);
    if (*prof) return cmd_profile(cfg);
    if (*spec) return cmd_spectral(cfg);
    if (*solve) return cmd_solve(cfg);
    if (*remv) return cmd_removability(cfg);
    if (*cls) return cmd_classify(cfg);
    if (*sweep) return cmd_sweep(cfg);
    if (*verify) return cmd_verify(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error USAGE: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "error " << to_string(e.code()) << ": " << msg << "\n";
    return e.code() == ErrorCode::Usage ? kUsage : kComputation;
  } catch (const std::exception& e) {
    std::cerr << "error INTERNAL: " << e.what() << "\n";
    return kComputation;
  }
  return kUsage;
}
