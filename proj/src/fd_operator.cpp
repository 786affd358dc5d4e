#include "bsl/fd_operator.hpp"

#include <cmath>

#include "bsl/errors.hpp"

namespace bsl::fd {

double p_laplacian(const Field& u, std::span<const double> x, double p, double h) {
  require(h > 0.0 && p > 1.0 && !x.empty(), ErrorCode::InvalidInput, "invalid finite-difference request");
  const std::size_t n = x.size();
  std::vector<double> y(x.begin(), x.end()), z(n);

  auto gradient_at = [&](const std::vector<double>& c, std::vector<double>& g) {
    z = c;
    for (std::size_t j = 0; j < n; ++j) {
      z[j] = c[j] + 0.5 * h;
      const double up = u(z);
      z[j] = c[j] - 0.5 * h;
      const double um = u(z);
      z[j] = c[j];
      g[j] = (up - um) / h;
    }
  };

  std::vector<double> g(n);
  double div = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double flux[2];
    for (int side = 0; side < 2; ++side) {
      y[i] = x[i] + (side == 0 ? 0.5 : -0.5) * h;
      gradient_at(y, g);
      double norm2 = 0.0;
      for (double v : g) norm2 += v * v;
      flux[side] = (p == 2.0 ? 1.0 : std::pow(norm2, 0.5 * (p - 2.0))) * g[i];
    }
    y[i] = x[i];
    div += (flux[0] - flux[1]) / h;
  }
  return div;
}

double observed_order(double err_h, double err_half) { return std::log2(err_h / err_half); }

}  // namespace bsl::fd
