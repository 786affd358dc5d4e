#pragma once

#include <optional>
#include <string>

#include "bsl/errors.hpp"

namespace bsl {

/// Singularity strength: a finite k >= 0, or the strong (k = infinity) marker.
/// The strong solution is a different object than any u_k, so it is never
/// encoded as a floating-point infinity.
class Strength {
 public:
  constexpr Strength() = default;
  static Strength finite(double k);
  static constexpr Strength infinite() { return Strength(0.0, true); }

  constexpr bool is_infinite() const { return infinite_; }
  /// Throws Domain for the infinite marker.
  double value() const;
  std::string str() const;

  friend constexpr bool operator==(const Strength&, const Strength&) = default;

 private:
  constexpr Strength(double k, bool inf) : k_(k), infinite_(inf) {}
  double k_ = 0.0;
  bool infinite_ = false;
};

/// Equation data for  -div(|Du|^{p-2} Du) + A |u|^{q-1} u - B = 0  in dimension N.
struct ProblemParams {
  int N = 2;
  double p = 2.0;
  double q = 2.0;
  double A = 1.0;
  double B = 0.0;
  Strength k{};

  /// The N-Laplacian case p = N used throughout the half-space machinery.
  static ProblemParams n_laplacian(int N, double q, double A = 1.0, double B = 0.0);

  /// Base invariants: N >= 2, p > 1, A > 0, B >= 0, all finite.
  void validate() const;
  /// validate() plus p = N and q > N - 1.
  void require_profile_range() const;
  /// require_profile_range() plus q < 2N - 1.
  void require_subcritical() const;

  bool is_n_laplacian() const { return p == static_cast<double>(N); }
};

}  // namespace bsl
