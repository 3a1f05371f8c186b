#pragma once

// Reference computations that share no code with the library.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Adaptive Gauss-Kronrod from Boost, splitting at the given interior points.
template <class F>
double integrate(F f, double a, double b, std::vector<double> splits = {}) {
  splits.insert(splits.begin(), a);
  splits.push_back(b);
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < splits.size(); ++i) {
    if (splits[i + 1] <= splits[i]) continue;
    s += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, splits[i], splits[i + 1], 15, 1e-14);
  }
  return s;
}

/// Fixed 30-point Gauss-Legendre on n equal panels, for smooth integrands.
template <class F>
double integrate_panels(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += boost::math::quadrature::gauss<double, 30>::integrate(f, a + i * h, a + (i + 1) * h);
  return s;
}

/// Neumann cosine series for G^(q) on [-a/2, a/2], first M modes.
inline double neumann_series(double a, int q, double x, double y, int M) {
  double s = 0.0;
  for (int m = M; m >= 1; --m) {
    const double th = m * pi / a;
    s += (2.0 / a) * std::cos(th * (x + a / 2)) * std::cos(th * (y + a / 2)) / std::pow(th * th, q + 1);
  }
  return s;
}

/// J_n(x) from its power series (moderate x only).
inline double bessel_j_series(int n, double x) {
  double term = std::pow(x / 2, n) / std::tgamma(n + 1.0);
  double s = term;
  for (int k = 1; k < 200; ++k) {
    term *= -(x * x / 4) / (k * (k + n));
    s += term;
    if (std::abs(term) < 1e-18 * std::abs(s)) break;
  }
  return s;
}

/// J_n'(x) = (J_{n-1} - J_{n+1}) / 2, with J_0' = -J_1.
inline double bessel_jp_series(int n, double x) {
  if (n == 0) return -bessel_j_series(1, x);
  return 0.5 * (bessel_j_series(n - 1, x) - bessel_j_series(n + 1, x));
}

template <class F>
double bisect(F f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::abs(hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

} // namespace oracle
