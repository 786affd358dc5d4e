#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bsl {

enum class ErrorCode {
  Domain,
  InvalidInput,
  NoBracket,
  NonConvergence,
  IllPosed,
  ProjectionFailure,
  EllipticityFailure,
  DegenerateFit,
  Ambiguous,
  Usage,
  Io,
};

/// Stable machine-readable name, e.g. "DOMAIN" or "NO_BRACKET".
std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by iterative solvers; carries the iteration history so callers can
/// inspect how far the solve got.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, std::vector<double> history, double last_damping)
      : Error(ErrorCode::NonConvergence, what),
        residual_history_(std::move(history)),
        last_damping_(last_damping) {}

  const std::vector<double>& residual_history() const noexcept { return residual_history_; }
  double last_damping() const noexcept { return last_damping_; }

 private:
  std::vector<double> residual_history_;
  double last_damping_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace bsl
