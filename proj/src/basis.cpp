#include <sumrules/basis.hpp>
#include <sumrules/errors.hpp>

#include <cmath>
#include <numbers>

namespace sumrules {

BasisTable::BasisTable(BoundaryCondition bc, double a, std::size_t size) : bc_(bc), a_(a), size_(size) {
  if (!(a > 0.0)) throw ParameterError("basis length must be positive");
}

BasisFunction BasisTable::function(std::size_t m) const {
  const double c = std::sqrt(2.0 / a_);
  const int im = static_cast<int>(m);
  switch (bc_) {
    case BoundaryCondition::neumann:
      return m == 0 ? BasisFunction{1.0 / std::sqrt(a_), false, 0} : BasisFunction{c, false, im};
    case BoundaryCondition::periodic: {
      if (m == 0) return {1.0 / std::sqrt(a_), false, 0};
      const int k = (im + 1) / 2;
      return {c, m % 2 == 0, 2 * k};
    }
    case BoundaryCondition::dirichlet: return {c, true, im + 1};
  }
  return {0.0, false, 0};
}

double BasisTable::eigenvalue(std::size_t m) const {
  const double w = std::numbers::pi * function(m).freq / a_;
  return w * w;
}

double BasisTable::theta(double x) const noexcept { return std::numbers::pi * (x + 0.5 * a_) / a_; }

double BasisTable::value(std::size_t m, double x) const {
  const auto f = function(m);
  const double arg = f.freq * theta(x);
  return f.norm * (f.sine ? std::sin(arg) : std::cos(arg));
}

} // namespace sumrules
