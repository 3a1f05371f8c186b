#pragma once

// Eigenfunctions of -d^2/dx^2 on [-a/2, a/2]. With theta = pi (x + a/2) / a:
//   Neumann:   1/sqrt(a), sqrt(2/a) cos(m theta)               eps = (m pi / a)^2
//   periodic:  1/sqrt(a), sqrt(2/a) cos(2k theta), sin(2k theta)  eps = (2 k pi / a)^2
//   Dirichlet: sqrt(2/a) sin((m+1) theta)                     eps = ((m+1) pi / a)^2

#include <sumrules/greens.hpp>

#include <cstddef>

namespace sumrules {

struct BasisFunction {
  double norm;  // prefactor
  bool sine;    // sin instead of cos
  int freq;     // multiple of theta
};

class BasisTable {
public:
  BasisTable(BoundaryCondition bc, double a, std::size_t size);

  [[nodiscard]] BoundaryCondition bc() const noexcept { return bc_; }
  [[nodiscard]] double length() const noexcept { return a_; }
  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  /// Index of the first non-constant mode (1 with a zero mode, else 0).
  [[nodiscard]] std::size_t first_nonzero() const noexcept { return has_zero_mode(bc_) ? 1 : 0; }

  [[nodiscard]] BasisFunction function(std::size_t m) const;
  [[nodiscard]] double eigenvalue(std::size_t m) const;
  [[nodiscard]] double value(std::size_t m, double x) const;
  [[nodiscard]] double theta(double x) const noexcept;

private:
  BoundaryCondition bc_;
  double a_;
  std::size_t size_;
};

} // namespace sumrules
