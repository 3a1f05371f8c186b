#pragma once

// Positive weights Sigma(x) on an interval [-a/2, a/2], or on the rectangle
// [-a/2, a/2] x [-b/2, b/2] when Sigma depends on x only.

#include <sumrules/dual.hpp>
#include <sumrules/expr.hpp>
#include <sumrules/quadrature.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sumrules {

struct IntervalDomain {
  double a = 1.0;

  explicit IntervalDomain(double length = 1.0);
  [[nodiscard]] double lo() const noexcept { return -0.5 * a; }
  [[nodiscard]] double hi() const noexcept { return 0.5 * a; }
  [[nodiscard]] bool contains(double x) const noexcept;
  /// Throws DomainError when x lies outside the interval.
  void check(double x) const;
};

struct RectangleDomain {
  double a = 1.0;
  double b = 2.0 * 3.141592653589793238462643383279502884;

  RectangleDomain(double width, double height);
  [[nodiscard]] double area() const noexcept { return a * b; }
};

enum class DensityKind { uniform, borg, oscillating, annulus, expression };

[[nodiscard]] std::string_view to_string(DensityKind k) noexcept;

class Density {
public:
  static Density uniform(double a = 1.0);
  /// (1+alpha)^2 / (1 + alpha (x + 1/2))^4 on [-1/2, 1/2]; alpha > -1.
  static Density borg(double alpha);
  /// 2 + sin(2 pi (x + 1/2)/eps + phase) on [-1/2, 1/2]; eps > 0.
  static Density oscillating(double eps, double phase = 0.0);
  /// r e^{2x} on the rectangle log(1/r) x 2 pi; 0 < r < 1.
  static Density annulus(double r_min);
  static Density expression(expr::BoundExpression e, double a = 1.0);

  /// Sigma(x); the coordinate is checked against the interval.
  double operator()(double x) const;
  /// Sigma and dSigma/dx at x.
  [[nodiscard]] Dual value_and_derivative(double x) const;

  [[nodiscard]] DensityKind kind() const noexcept { return kind_; }
  [[nodiscard]] const IntervalDomain& interval() const noexcept { return interval_; }
  /// Present only for the annulus.
  [[nodiscard]] const std::optional<RectangleDomain>& rectangle() const noexcept { return rect_; }
  [[nodiscard]] double length() const noexcept { return interval_.a; }
  /// alpha, eps, or r_min depending on kind; 0 otherwise.
  [[nodiscard]] double parameter() const noexcept { return param_; }
  [[nodiscard]] double phase() const noexcept { return phase_; }
  [[nodiscard]] const std::optional<expr::BoundExpression>& expression_ptr() const noexcept { return expr_; }
  /// Human-readable description, e.g. "borg(alpha=1)".
  [[nodiscard]] std::string describe() const;

private:
  Density(DensityKind k, IntervalDomain dom) : kind_(k), interval_(dom) {}
  template <class T>
  T eval(T x) const;

  DensityKind kind_;
  IntervalDomain interval_;
  std::optional<RectangleDomain> rect_;
  double param_ = 0.0;
  double phase_ = 0.0;
  std::optional<expr::BoundExpression> expr_;
};

/// Builds a builtin by name: "uniform" (length), "borg" (alpha),
/// "oscillating" (epsilon, phase), "annulus" (rmin).
Density make_builtin(std::string_view name, const expr::ParamMap& params);

/// Interior points where quadrature panels should break: one per period of
/// the oscillating density, none otherwise.
std::vector<double> density_breakpoints(const Density& d);

/// Integral of Sigma over the interval (times b on the rectangle).
QuadratureResult density_integral(const Density& d, const QuadratureOptions& opts = kDefault1d);

struct PositivityReport {
  bool ok = true;
  double x = 0.0;      // location of the smallest value found
  double value = 0.0;  // Sigma there
};

/// Dense grid scan plus golden-section refinement around the smallest sample.
PositivityReport validate_positivity(const Density& d, std::size_t grid_points = 4097);

} // namespace sumrules
