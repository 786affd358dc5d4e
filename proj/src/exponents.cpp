#include "bsl/exponents.hpp"

#include <cmath>
#include <string>

namespace bsl::exponents {

namespace {

void check_dimension(int N) { require(N >= 2, ErrorCode::Domain, "dimension N must be >= 2"); }

void check_profile_q(int N, double q) {
  check_dimension(N);
  require(std::isfinite(q) && q > N - 1.0, ErrorCode::Domain,
          "q must exceed N - 1 (got q = " + std::to_string(q) + ", N = " + std::to_string(N) + ")");
}

}  // namespace

double beta_q(int N, double q) {
  check_profile_q(N, q);
  return N / (q + 1.0 - N);
}

double beta_q(const ProblemParams& params) { return beta_q(params.N, params.q); }

double critical_q(int N) {
  check_dimension(N);
  return 2.0 * N - 1.0;
}

double lambda_sep(int N, double q) {
  const double b = beta_q(N, q);
  return (N - 1.0) * b * b;
}

double const_solution(int N, double q) {
  const double b = beta_q(N, q);
  return std::pow((N - 1.0) * std::pow(b, N), 1.0 / (q + 1.0 - N));
}

double const_solution(const ProblemParams& params) { return const_solution(params.N, params.q); }

double constant_residual(int N, double q, double c) {
  const double b = beta_q(N, q);
  const double lam = (N - 1.0) * b * b;
  return -lam * std::pow(b, N - 2) * std::pow(std::abs(c), N - 2) * c + std::pow(std::abs(c), q - 1.0) * c;
}

double scaling_exponent(int N, double q) {
  check_profile_q(N, q);
  require(q < 2.0 * N - 1.0, ErrorCode::Domain, "scaling exponent requires q < 2N - 1");
  return (2.0 * N - 1.0 - q) / (q + 1.0 - N);
}

double scaling_exponent(const ProblemParams& params) { return scaling_exponent(params.N, params.q); }

double beta_pq(double p, double q) {
  require(std::isfinite(p) && p > 1.0, ErrorCode::Domain, "p must be > 1");
  require(std::isfinite(q) && q > p - 1.0, ErrorCode::Domain, "q must exceed p - 1");
  return p / (q + 1.0 - p);
}

double lambda_pq(double p, double q, int N) {
  check_dimension(N);
  const double b = beta_pq(p, q);
  return b * (q * b - N);
}

double lambda_spectral(double beta, double p, int N) { return beta * (beta * (p - 1.0) + p - N); }

double kv_root(double p) {
  require(std::isfinite(p) && p > 1.0, ErrorCode::Domain, "p must be > 1");
  // 3 b^2 + 2 c b - 1 = 0  =>  b = (-c + sqrt(c^2 + 3)) / 3, written to avoid cancellation.
  const double c = (p - 3.0) / (p - 1.0);
  return 1.0 / (c + std::sqrt(c * c + 3.0));
}

double beta2_sign_changing(int N) {
  check_dimension(N);
  const double n = N;
  return (7.0 * n - 1.0 + std::sqrt(n * n + 12.0 * n + 12.0)) / (6.0 * (n - 1.0));
}

ExponentTable exponent_table(const ProblemParams& params) {
  params.validate();
  const int N = params.N;
  const double q = params.q;
  ExponentTable t;
  t.N = N;
  t.p = params.p;
  t.q = q;
  t.beta_q = beta_q(N, q);
  t.q_c = critical_q(N);
  t.lambda_sep = lambda_sep(N, q);
  t.const_solution = const_solution(N, q);
  if (q < t.q_c) t.scaling_exp = scaling_exponent(N, q);
  if (q > params.p - 1.0) {
    t.beta_pq = beta_pq(params.p, q);
    t.lambda_pq = lambda_pq(params.p, q, N);
  }
  t.beta2 = beta2_sign_changing(N);
  t.kv_root = kv_root(params.p);
  t.critical = (q == t.q_c);
  return t;
}

}  // namespace bsl::exponents
