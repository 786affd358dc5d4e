#pragma once

#include <optional>

#include "bsl/params.hpp"

/// Closed-form exponents and thresholds of the boundary-singularity problem
///   -div(|Du|^{N-2} Du) + |u|^{q-1} u = 0   in the half space.
///
/// Everything here is an exact formula; downstream tolerances are pinned to
/// these values. Functions taking (N, q) directly assume p = N.
namespace bsl::exponents {

/// Similarity exponent of the strong singularity, N / (q + 1 - N). Requires q > N - 1.
double beta_q(int N, double q);
double beta_q(const ProblemParams& params);

/// Critical exponent 2N - 1 above which isolated boundary singularities are removable.
double critical_q(int N);

/// Zeroth-order coefficient of the spherical profile equation, (N - 1) beta_q^2.
double lambda_sep(int N, double q);

/// Positive constant solution ((N - 1) beta_q^N)^{1/(q+1-N)} of the spherical equation on S^{N-1}.
double const_solution(int N, double q);
double const_solution(const ProblemParams& params);

/// Zero-gradient residual  -Lambda beta^{N-2} c^{N-1} + |c|^{q-1} c  of a constant c.
double constant_residual(int N, double q, double c);

/// Exponent of the k-rescaling law T_r(u_k) = u_{r^s k}: s = (2N - 1 - q)/(q + 1 - N).
/// Requires N - 1 < q < 2N - 1.
double scaling_exponent(int N, double q);
double scaling_exponent(const ProblemParams& params);

/// General-p similarity exponent p / (q + 1 - p). Requires q > p - 1.
double beta_pq(double p, double q);

/// Coefficient of the general-p separable equation, beta_pq (q beta_pq - N).
/// Equals beta (beta (p - 1) + p - N) and reduces to lambda_sep at p = N.
double lambda_pq(double p, double q, int N);

/// lambda = beta (beta (p - 1) + p - N) of the spherical p-harmonic spectral equation.
double lambda_spectral(double beta, double p, int N);

/// Positive root of 3 b^2 + 2 ((p - 3)/(p - 1)) b - 1 = 0: the exponent of positive
/// p-harmonic functions in the half plane singular at one boundary point.
double kv_root(double p);

/// Exponent (7N - 1 + sqrt(N^2 + 12N + 12)) / (6 (N - 1)) of the sign-changing
/// singular N-harmonic function vanishing on the equator.
double beta2_sign_changing(int N);

struct ExponentTable {
  int N = 2;
  double p = 2.0;
  double q = 2.0;
  double beta_q = 0.0;
  double q_c = 0.0;
  double lambda_sep = 0.0;
  double const_solution = 0.0;
  std::optional<double> scaling_exp;  // only on N - 1 < q < 2N - 1
  std::optional<double> beta_pq;      // only when q > p - 1
  std::optional<double> lambda_pq;
  double beta2 = 0.0;
  double kv_root = 0.0;  // evaluated at the table's p
  bool critical = false;  // q == q_c
};

/// Full table for p = params.p (defaults to N); requires q > N - 1.
ExponentTable exponent_table(const ProblemParams& params);

}  // namespace bsl::exponents
