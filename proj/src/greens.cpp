#include <sumrules/basis.hpp>
#include <sumrules/errors.hpp>
#include <sumrules/greens.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace sumrules {
namespace {

void check_args(double a, double x, double y) {
  if (!(a > 0.0)) throw ParameterError("kernel length must be positive");
  const double h = 0.5 * a * (1.0 + 8.0 * std::numeric_limits<double>::epsilon());
  if (!(std::abs(x) <= h && std::abs(y) <= h))
    throw DomainError("kernel argument outside [-a/2, a/2]: (" + std::to_string(x) + ", " + std::to_string(y) + ")");
}

// Upper bound for sum_{k > K} k^-s, s > 1.
double zeta_tail_bound(double s, double K) {
  const double k1 = K + 1.0;
  return std::pow(k1, -s) + std::pow(k1, 1.0 - s) / (s - 1.0);
}

} // namespace

std::string_view to_string(BoundaryCondition bc) noexcept {
  switch (bc) {
    case BoundaryCondition::dirichlet: return "dirichlet";
    case BoundaryCondition::neumann: return "neumann";
    case BoundaryCondition::periodic: return "periodic";
  }
  return "?";
}

BoundaryCondition parse_bc(std::string_view t) {
  if (t == "dirichlet" || t == "DD" || t == "dd") return BoundaryCondition::dirichlet;
  if (t == "neumann" || t == "NN" || t == "nn") return BoundaryCondition::neumann;
  if (t == "periodic" || t == "PP" || t == "pp") return BoundaryCondition::periodic;
  throw ParameterError("unknown boundary condition '" + std::string(t) + "'");
}

double eval_g0(BoundaryCondition bc, double a, double x, double y) {
  check_args(a, x, y);
  const double d = std::abs(x - y);
  switch (bc) {
    case BoundaryCondition::neumann: return -0.5 * d + (x * x + y * y) / (2.0 * a) + a / 12.0;
    case BoundaryCondition::periodic: return (x - y) * (x - y) / (2.0 * a) - 0.5 * d + a / 12.0;
    case BoundaryCondition::dirichlet: {
      const double lo = std::min(x, y);
      const double hi = std::max(x, y);
      return (lo + 0.5 * a) * (0.5 * a - hi) / a;
    }
  }
  return 0.0;
}

double eval_g1(BoundaryCondition bc, double a, double x, double y) {
  check_args(a, x, y);
  if (y < x) std::swap(x, y);  // one branch only, so G1(x, y) == G1(y, x) bit for bit
  const double a2 = a * a;
  const double a4 = a2 * a2;
  const double d = x - y;
  const double d3 = d * d * d;
  // x <= y here; the other printed branch differs only in the sign of the cubic term.
  const double cubic = -60.0 * a * d3;
  switch (bc) {
    case BoundaryCondition::neumann: {
      const double x2 = x * x;
      const double y2 = y * y;
      return (a4 - 30.0 * a2 * (x2 - 6.0 * x * y + y2) + cubic - 30.0 * (x2 * x2 + 6.0 * x2 * y2 + y2 * y2)) /
             (720.0 * a);
    }
    case BoundaryCondition::periodic: {
      const double d2 = d * d;
      return (a4 - 30.0 * a2 * d2 + cubic - 30.0 * d2 * d2) / (720.0 * a);
    }
    case BoundaryCondition::dirichlet: break;
  }
  throw UnsupportedError("no closed form for the Dirichlet G1 kernel; use GreensKernel::convolve");
}

double shifted_neumann_kernel(double a, double eta, double x, double y) {
  check_args(a, x, y);
  if (!(eta > 0.0)) throw ParameterError("shift must be positive");
  const double k = std::sqrt(eta);
  const double lo = std::min(x, y);
  const double hi = std::max(x, y);
  // cosh(k(lo+a/2)) cosh(k(a/2-hi)) / (k sinh(ka)), with the large exponentials factored out.
  const double num = std::exp(k * (lo - hi)) * (1.0 + std::exp(-2.0 * k * (lo + 0.5 * a))) *
                     (1.0 + std::exp(-2.0 * k * (0.5 * a - hi)));
  return num / (2.0 * k * -std::expm1(-2.0 * k * a));
}

SeriesValue spectral_series_oracle(BoundaryCondition bc, double a, int q, double x, double y, std::size_t M) {
  check_args(a, x, y);
  if (q < 0) throw ParameterError("kernel order must be >= 0");
  if (M < 1) throw ParameterError("mode count must be >= 1");
  BasisTable basis(bc, a, M + (has_zero_mode(bc) ? 1 : 0));
  SeriesValue out;
  out.modes = M;
  // Sum smallest terms first.
  for (std::size_t i = basis.size(); i-- > basis.first_nonzero();) {
    out.value += basis.value(i, x) * basis.value(i, y) / std::pow(basis.eigenvalue(i), q + 1);
  }
  const double s = 2.0 * q + 2.0;
  const double pi = std::numbers::pi;
  switch (bc) {
    case BoundaryCondition::neumann:
    case BoundaryCondition::dirichlet:
      out.error_bound = (2.0 / a) * std::pow(a / pi, s) * zeta_tail_bound(s, static_cast<double>(M));
      break;
    case BoundaryCondition::periodic:
      out.error_bound = 2.0 * (2.0 / a) * std::pow(a / (2.0 * pi), s) * zeta_tail_bound(s, static_cast<double>(M / 2));
      break;
  }
  return out;
}

GreensKernel GreensKernel::closed_form(BoundaryCondition bc, double a, int q) {
  if (!(a > 0.0)) throw ParameterError("kernel length must be positive");
  if (q == 0) return {bc, a, 0, Representation::closed_form, [bc, a](double x, double y) { return eval_g0(bc, a, x, y); }};
  if (q == 1) {
    if (bc == BoundaryCondition::dirichlet)
      throw UnsupportedError("no closed form for the Dirichlet G1 kernel; use GreensKernel::convolve");
    return {bc, a, 1, Representation::closed_form, [bc, a](double x, double y) { return eval_g1(bc, a, x, y); }};
  }
  throw UnsupportedError("closed forms exist for orders 0 and 1 only");
}

GreensKernel GreensKernel::spectral(BoundaryCondition bc, double a, int q, std::size_t modes) {
  return {bc, a, q, Representation::spectral,
          [=](double x, double y) { return spectral_series_oracle(bc, a, q, x, y, modes).value; }};
}

GreensKernel GreensKernel::convolve(const GreensKernel& prev, const GreensKernel& g0, const QuadratureOptions& opts) {
  if (prev.bc_ != g0.bc_ || prev.a_ != g0.a_) throw ParameterError("convolution needs matching bc and length");
  if (g0.q_ != 0) throw ParameterError("second convolution factor must be the order-0 kernel");
  const double a = prev.a_;
  auto f = [p = prev.f_, g = g0.f_, a, opts](double x, double y) {
    // Order the arguments so the result is exactly symmetric.
    const double u = std::min(x, y);
    const double v = std::max(x, y);
    std::array<double, 2> splits{u, v};
    return integrate_1d([&](double z) { return g(u, z) * p(z, v); }, -0.5 * a, 0.5 * a, opts, splits).value;
  };
  return {prev.bc_, a, prev.q_ + 1, Representation::convolution, std::move(f)};
}

double GreensKernel::operator()(double x, double y) const { return f_(x, y); }

} // namespace sumrules
