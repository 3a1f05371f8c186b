#pragma once

// Z_p = sum_n 1/E_n^p over the non-zero spectrum of -psi'' = E Sigma psi.
//   Z1 = T1 - B0 / int Sigma
//   Z2 = T2 - (2/V) B1 - (3 e2^2 - 2 e1 e3) / e1^4
// with T1 = int G0(x,x) Sigma, T2 = int int G0^2 Sigma Sigma and
// Bq = int int Sigma G^(q) Sigma. Dirichlet keeps only the trace term.

#include <sumrules/density.hpp>
#include <sumrules/greens.hpp>
#include <sumrules/zero_mode.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace sumrules {

struct SumRuleOptions {
  QuadratureOptions quad_1d{1e-13, 0.0, 50000};
  QuadratureOptions quad_2d{1e-12, 1e-12, 50000};
  ZeroModeOptions zero_mode{};
};

struct SumRuleResult {
  int order = 1;
  double trace_term = 0.0;
  double g1_term = 0.0;  // -(2/V) B1, order 2 only
  double zero_mode_subtraction = 0.0;
  double value = 0.0;
  double error_estimate = 0.0;
  BoundaryCondition bc = BoundaryCondition::neumann;
  std::string problem;
  std::optional<ZeroModeExpansion> e0;
};

QuadratureResult trace_t1(const Density& d, BoundaryCondition bc, const SumRuleOptions& opts = {});
QuadratureResult trace_t2(const Density& d, BoundaryCondition bc, const SumRuleOptions& opts = {});
/// q in {0, 1}; throws NoZeroModeError for Dirichlet.
QuadratureResult bilinear_b(const Density& d, BoundaryCondition bc, int q, const SumRuleOptions& opts = {});

SumRuleResult z1(const Density& d, BoundaryCondition bc, const SumRuleOptions& opts = {});
SumRuleResult z2(const Density& d, BoundaryCondition bc, const SumRuleOptions& opts = {});

struct AnnulusOptions {
  SumRuleOptions sum_rule{};
  std::size_t angular_modes = 48;  // summed explicitly; the rest from a fitted tail
  std::size_t tail_terms = 6;      // inverse powers n^-3 .. in the tail model
};

struct AnnulusZ2 {
  SumRuleResult result;
  double without_zero_mode = 0.0;  // trace term alone
  double radial_trace = 0.0;       // angular mode 0
  double angular_sum = 0.0;        // modes 1..N, both parities
  double angular_tail = 0.0;
  std::vector<double> tail_coefficients;  // c3, c4, ... of T(n) ~ sum c_k / n^k
};

/// Neumann annulus r_min < r < 1, via the rectangle log(1/r_min) x 2 pi.
AnnulusZ2 annulus_z2(double r_min, const AnnulusOptions& opts = {});

/// 5 pi^2/48 - 155/192 + 139 r^2/96.
[[nodiscard]] double annulus_asymptotic(double r_min) noexcept;
/// r_min -> 0 limit of the annulus Z2.
[[nodiscard]] double annulus_limit() noexcept;

struct ReferenceValue {
  double value = 0.0;
  bool exact = true;  // false for truncated asymptotic series
  std::string formula;
};

/// Closed-form values for catalogued problems: uniform(length), borg(alpha),
/// oscillating(epsilon), annulus(rmin), disk. Throws UnsupportedError otherwise.
ReferenceValue reference_value(std::string_view problem, const expr::ParamMap& params, BoundaryCondition bc,
                               int order);

struct E0Reference {
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;
};

/// Printed closed forms for the oscillating string (Neumann).
E0Reference oscillating_e0_reference(double eps);
/// Small-eps leading terms of the same coefficients.
E0Reference oscillating_e0_leading(double eps);

struct AnnulusPrinted {
  double e1 = 0.0;  // -log r / (1 - r^2) as printed
  double e2 = 0.0;
  double e3 = 0.0;
  double g1_term = 0.0;  // -(2/V) B1
};

AnnulusPrinted annulus_printed_terms(double r_min);

} // namespace sumrules
