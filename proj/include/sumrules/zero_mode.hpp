#pragma once

// Ground state of (-d^2 + gamma) psi = E Sigma psi for small gamma when the
// unshifted problem has a constant zero mode:
//   E0(gamma) = e1 gamma + e2 gamma^2 + e3 gamma^3 + O(gamma^4).
// With s_m = int Sigma phi_m, A = sum' s_m^2/eps_m / V, D = sum' s_m^2/eps_m^2 / V
// and C = sum' sum' s_m S_mn s_n / (eps_m eps_n) / V:
//   e1 = V / int Sigma,  e2 = -e1^3 A,  e3 = -2 e1^2 e2 A - e1^4 C + e1^3 D.

#include <sumrules/basis.hpp>
#include <sumrules/density.hpp>
#include <sumrules/greens.hpp>

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace sumrules {

/// S(m, n) = int phi_m Sigma phi_n for the first `size` modes, and their eigenvalues.
struct MatrixElementTable {
  BoundaryCondition bc;
  double length;
  Eigen::MatrixXd S;
  std::vector<double> eps;

  [[nodiscard]] std::size_t size() const noexcept { return eps.size(); }
};

MatrixElementTable matrix_elements(const Density& d, BoundaryCondition bc, std::size_t size,
                                   const QuadratureOptions& opts = kDefault1d);

/// s_m = int Sigma phi_m for m < size.
std::vector<double> density_projections(const Density& d, BoundaryCondition bc, std::size_t size,
                                        const QuadratureOptions& opts = kDefault1d);

/// u(z) = int G0(z, y) Sigma(y) dy.
double zero_mode_potential(const Density& d, BoundaryCondition bc, double z,
                           const QuadratureOptions& opts = kDefault1d);

enum class E3Route {
  matrix_elements,  // truncated mode sums, doubled until stable
  kernel            // int Sigma u^2 with the closed-form kernel, no truncation
};

struct ZeroModeOptions {
  E3Route route = E3Route::matrix_elements;
  std::size_t initial_modes = 512;
  std::size_t max_modes = 8192;
  double e3_change_tol = 1e-9;  // relative to max(1, |e3|)
  QuadratureOptions quadrature{1e-13, 1e-13, 50000};
};

struct ZeroModeExpansion {
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;
  std::size_t truncation_M = 0;        // 0 on the kernel route
  double e3_truncation_estimate = 0.0;
  double error_estimate = 0.0;         // quadrature part, all coefficients
  // Ingredients, on the interval (V = a).
  double volume = 0.0;
  double sigma_integral = 0.0;
  double b0 = 0.0;  // int int Sigma G0 Sigma
  double b1 = 0.0;  // int int Sigma G1 Sigma
  double c = 0.0;   // int Sigma u^2
};

/// Throws NoZeroModeError for Dirichlet. The annulus uses its interval, which
/// gives the same coefficients as the full rectangle.
ZeroModeExpansion e0_coefficients(const Density& d, BoundaryCondition bc, const ZeroModeOptions& opts = {});

/// Lowest eigenvalue of the shifted problem from a Rayleigh-Ritz solve in the
/// first `modes` Laplacian eigenfunctions.
double shifted_eigen_oracle(const Density& d, BoundaryCondition bc, double gamma, std::size_t modes = 256);

/// Same, reusing a precomputed table.
double shifted_eigen_oracle(const MatrixElementTable& table, double gamma);

[[nodiscard]] double e0_series_eval(const ZeroModeExpansion& z, double gamma) noexcept;

struct RichardsonEstimate {
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;
  std::array<double, 3> gammas{};
  std::array<double, 3> energies{};
};

/// Fits E0(gamma)/gamma = e1 + e2 gamma + e3 gamma^2 through three oracle values.
RichardsonEstimate richardson_extract(const MatrixElementTable& table, std::array<double, 3> gammas);

} // namespace sumrules
