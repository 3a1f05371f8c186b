#pragma once

// Regularised Green's kernels G^(q)(x, y) = sum'_n phi_n(x) phi_n(y) / eps_n^(q+1)
// of -d^2/dx^2 on [-a/2, a/2]. The prime drops the constant mode for Neumann
// and periodic conditions.

#include <sumrules/quadrature.hpp>

#include <cstddef>
#include <functional>
#include <memory>
#include <string_view>

namespace sumrules {

enum class BoundaryCondition { dirichlet, neumann, periodic };

[[nodiscard]] std::string_view to_string(BoundaryCondition bc) noexcept;
/// Accepts dirichlet/neumann/periodic and the short forms DD/NN/PP.
BoundaryCondition parse_bc(std::string_view text);
[[nodiscard]] constexpr bool has_zero_mode(BoundaryCondition bc) noexcept { return bc != BoundaryCondition::dirichlet; }

double eval_g0(BoundaryCondition bc, double a, double x, double y);
/// Throws UnsupportedError for Dirichlet.
double eval_g1(BoundaryCondition bc, double a, double x, double y);

/// Neumann kernel of -d^2/dx^2 + eta (eta > 0); no mode is removed.
double shifted_neumann_kernel(double a, double eta, double x, double y);

struct SeriesValue {
  double value = 0.0;
  double error_bound = 0.0;  // bound on the dropped tail
  std::size_t modes = 0;
};

/// Partial sum over the first M non-constant modes.
SeriesValue spectral_series_oracle(BoundaryCondition bc, double a, int q, double x, double y, std::size_t M);

class GreensKernel {
public:
  enum class Representation { closed_form, spectral, convolution };

  /// q = 0 for every bc, q = 1 for Neumann and periodic.
  static GreensKernel closed_form(BoundaryCondition bc, double a, int q);
  static GreensKernel spectral(BoundaryCondition bc, double a, int q, std::size_t modes);
  /// G^(q+1)(x, y) = int G0(x, z) prev(z, y) dz, evaluated by adaptive quadrature.
  static GreensKernel convolve(const GreensKernel& prev, const GreensKernel& g0,
                               const QuadratureOptions& opts = kDefault1d);

  double operator()(double x, double y) const;

  [[nodiscard]] BoundaryCondition bc() const noexcept { return bc_; }
  [[nodiscard]] double length() const noexcept { return a_; }
  [[nodiscard]] int order() const noexcept { return q_; }
  [[nodiscard]] Representation representation() const noexcept { return rep_; }

private:
  GreensKernel(BoundaryCondition bc, double a, int q, Representation rep,
               std::function<double(double, double)> f)
      : bc_(bc), a_(a), q_(q), rep_(rep), f_(std::move(f)) {}

  BoundaryCondition bc_;
  double a_;
  int q_;
  Representation rep_;
  std::function<double(double, double)> f_;
};

} // namespace sumrules
