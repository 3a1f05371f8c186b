#pragma once

#include <cmath>

namespace sumrules {

/// Forward-mode value/derivative pair. Used to get dSigma/dx from densities
/// without finite differences.
struct Dual {
  double v = 0.0;
  double d = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double value, double deriv = 0.0) : v(value), d(deriv) {}  // NOLINT(google-explicit-constructor)
};

inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator-(Dual a) { return {-a.v, -a.d}; }
inline Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
inline Dual operator/(Dual a, Dual b) { return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)}; }

inline Dual sin(Dual a) { return {std::sin(a.v), a.d * std::cos(a.v)}; }
inline Dual cos(Dual a) { return {std::cos(a.v), -a.d * std::sin(a.v)}; }
inline Dual tan(Dual a) {
  const double t = std::tan(a.v);
  return {t, a.d * (1.0 + t * t)};
}
inline Dual exp(Dual a) {
  const double e = std::exp(a.v);
  return {e, a.d * e};
}
inline Dual log(Dual a) { return {std::log(a.v), a.d / a.v}; }
inline Dual sqrt(Dual a) {
  const double s = std::sqrt(a.v);
  return {s, a.d / (2.0 * s)};
}
inline Dual abs(Dual a) { return a.v < 0.0 ? -a : a; }
inline Dual pow(Dual a, Dual b) {
  const double p = std::pow(a.v, b.v);
  double d = 0.0;
  if (a.d != 0.0) d += b.v * std::pow(a.v, b.v - 1.0) * a.d;
  if (b.d != 0.0) d += p * std::log(a.v) * b.d;
  return {p, d};
}

inline double value_of(double x) { return x; }
inline double value_of(Dual x) { return x.v; }

} // namespace sumrules
