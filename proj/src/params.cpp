#include "bsl/params.hpp"

#include <cmath>
#include <sstream>

namespace bsl {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return "DOMAIN";
    case ErrorCode::InvalidInput: return "INVALID_INPUT";
    case ErrorCode::NoBracket: return "NO_BRACKET";
    case ErrorCode::NonConvergence: return "NON_CONVERGENCE";
    case ErrorCode::IllPosed: return "ILL_POSED";
    case ErrorCode::ProjectionFailure: return "PROJECTION_FAILURE";
    case ErrorCode::EllipticityFailure: return "ELLIPTICITY_FAILURE";
    case ErrorCode::DegenerateFit: return "DEGENERATE_FIT";
    case ErrorCode::Ambiguous: return "AMBIGUOUS";
    case ErrorCode::Usage: return "USAGE";
    case ErrorCode::Io: return "IO";
  }
  return "UNKNOWN";
}

Strength Strength::finite(double k) {
  require(std::isfinite(k) && k >= 0.0, ErrorCode::Domain, "strength k must be finite and >= 0");
  return Strength(k, false);
}

double Strength::value() const {
  require(!infinite_, ErrorCode::Domain, "operation does not accept the infinite strength marker");
  return k_;
}

std::string Strength::str() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << k_;
  return os.str();
}

ProblemParams ProblemParams::n_laplacian(int N, double q, double A, double B) {
  ProblemParams p;
  p.N = N;
  p.p = N;
  p.q = q;
  p.A = A;
  p.B = B;
  return p;
}

void ProblemParams::validate() const {
  require(N >= 2, ErrorCode::Domain, "dimension N must be >= 2");
  require(std::isfinite(p) && p > 1.0, ErrorCode::Domain, "gradient exponent p must be > 1");
  require(std::isfinite(q), ErrorCode::Domain, "absorption exponent q must be finite");
  require(std::isfinite(A) && A > 0.0, ErrorCode::Domain, "coefficient A must be > 0");
  require(std::isfinite(B) && B >= 0.0, ErrorCode::Domain, "source bound B must be >= 0");
}

void ProblemParams::require_profile_range() const {
  validate();
  require(is_n_laplacian(), ErrorCode::Domain, "operation requires p = N");
  require(q > N - 1.0, ErrorCode::Domain, "operation requires q > N - 1");
}

void ProblemParams::require_subcritical() const {
  require_profile_range();
  require(q < 2.0 * N - 1.0, ErrorCode::Domain, "operation requires q < 2N - 1");
}

}  // namespace bsl
