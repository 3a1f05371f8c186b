#pragma once

// Eigenvalues of -psi'' = E Sigma psi computed without the sum-rule formulas:
// Pruefer shooting (Dirichlet, Neumann), Floquet discriminant (periodic),
// Rayleigh-Ritz in the Laplacian basis, and Bessel roots for the disk/annulus.

#include <sumrules/density.hpp>
#include <sumrules/greens.hpp>
#include <sumrules/zero_mode.hpp>

#include <Eigen/Dense>

#include <cstddef>
#include <string_view>
#include <vector>

namespace sumrules {

enum class SpectrumMethod { pruefer, monodromy, rayleigh_ritz, bessel };

[[nodiscard]] std::string_view to_string(SpectrumMethod m) noexcept;
SpectrumMethod parse_method(std::string_view text);

struct SpectrumEntry {
  double value = 0.0;
  int multiplicity = 1;
  double accuracy = 0.0;  // absolute error estimate
  int level = 0;          // mode number n >= 1; angular order for Bessel spectra
  int branch = 0;         // periodic: 0 lower, 1 upper member of a level; Bessel: radial index
};

struct Spectrum {
  std::vector<SpectrumEntry> entries;  // ascending
  SpectrumMethod method = SpectrumMethod::pruefer;
  BoundaryCondition bc = BoundaryCondition::neumann;
  bool zero_mode_removed = false;

  /// Number of eigenvalues counted with multiplicity.
  [[nodiscard]] std::size_t count() const noexcept;
  /// Eigenvalues repeated by multiplicity.
  [[nodiscard]] std::vector<double> values() const;
  /// sum_n E_n^-p with multiplicity, smallest terms first.
  [[nodiscard]] double partial_sum(int p) const;
};

struct ShootingOptions {
  double rel_tol = 1e-12;        // eigenvalue refinement
  double ode_abs_tol = 1e-12;    // Pruefer phase integration
  double ode_rel_tol = 1e-13;
};

/// First `count` non-zero eigenvalues. Pruefer for Dirichlet/Neumann,
/// monodromy for periodic.
Spectrum sl_spectrum(const Density& d, BoundaryCondition bc, std::size_t count, SpectrumMethod method,
                     const ShootingOptions& opts = {});

/// Pruefer phase theta(a/2) for energy E, started at 0 (Dirichlet) or pi/2 (Neumann).
double pruefer_phase(const Density& d, BoundaryCondition bc, double E, const ShootingOptions& opts = {});

/// Trace of the period map y(a/2) + y'(a/2) summed over the two fundamental solutions.
double floquet_discriminant(const Density& d, double E, const ShootingOptions& opts = {});

/// Generalised problem A c = lambda B c with B symmetric positive definite, ascending.
Eigen::VectorXd generalized_sym_eig(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

/// Rayleigh-Ritz in the first M Laplacian eigenfunctions; drops the zero eigenvalue.
Spectrum rayleigh_ritz(const Density& d, BoundaryCondition bc, std::size_t M);
Spectrum rayleigh_ritz(const MatrixElementTable& table);

/// First k positive roots of J_n'(x), or of J_n'(r x) Y_n'(x) - J_n'(x) Y_n'(r x) when r > 0.
std::vector<double> bessel_deriv_roots(int n, std::size_t k, double r_min = 0.0);

/// Neumann spectrum of the unit disk (r_min = 0) or annulus, with multiplicity,
/// truncated to `count` eigenvalues.
Spectrum disk_annulus_spectrum(double r_min, std::size_t count);

} // namespace sumrules
