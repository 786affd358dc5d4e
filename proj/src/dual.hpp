#pragma once

#include <array>
#include <cmath>

namespace bsl::detail {

/// Forward-mode dual number with K derivative directions.
template <int K>
struct Dual {
  double v = 0.0;
  std::array<double, K> d{};

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: constants promote implicitly

  static Dual variable(double value, int slot) {
    Dual x(value);
    x.d[slot] = 1.0;
    return x;
  }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < K; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < K; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int i = 0; i < K; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const double inv = 1.0 / o.v;
    for (int i = 0; i < K; ++i) d[i] = (d[i] - v * inv * o.d[i]) * inv;
    v *= inv;
    return *this;
  }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
  friend Dual operator-(Dual a) {
    a.v = -a.v;
    for (auto& x : a.d) x = -x;
    return a;
  }
};

template <int K>
Dual<K> chain(const Dual<K>& x, double f, double df) {
  Dual<K> y(f);
  for (int i = 0; i < K; ++i) y.d[i] = df * x.d[i];
  return y;
}

template <int K>
Dual<K> pow(const Dual<K>& x, double e) {
  const double f = std::pow(x.v, e);
  return chain(x, f, x.v == 0.0 ? (e == 1.0 ? 1.0 : 0.0) : e * f / x.v);
}

/// |x|^{e-1} x, the odd power used by the absorption term.
template <int K>
Dual<K> signed_pow(const Dual<K>& x, double e) {
  const double a = std::abs(x.v);
  return chain(x, std::pow(a, e - 1.0) * x.v, e * std::pow(a, e - 1.0));
}

inline double signed_pow(double x, double e) { return std::pow(std::abs(x), e - 1.0) * x; }

inline double value(double x) { return x; }
template <int K>
double value(const Dual<K>& x) {
  return x.v;
}

}  // namespace bsl::detail
