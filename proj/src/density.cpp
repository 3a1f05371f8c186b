#include <sumrules/density.hpp>
#include <sumrules/errors.hpp>

#include <boost/math/tools/minima.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sumrules {

IntervalDomain::IntervalDomain(double length) : a(length) {
  if (!(length > 0.0) || !std::isfinite(length)) throw ParameterError("interval length must be positive");
}

bool IntervalDomain::contains(double x) const noexcept {
  // Allow a few ulps of slack so quadrature nodes at the ends pass.
  const double slack = 8.0 * std::numeric_limits<double>::epsilon() * a;
  return x >= lo() - slack && x <= hi() + slack;
}

void IntervalDomain::check(double x) const {
  if (!contains(x)) {
    std::ostringstream os;
    os << "coordinate " << x << " outside [" << lo() << ", " << hi() << "]";
    throw DomainError(os.str());
  }
}

RectangleDomain::RectangleDomain(double width, double height) : a(width), b(height) {
  if (!(width > 0.0) || !(height > 0.0)) throw ParameterError("rectangle sides must be positive");
}

std::string_view to_string(DensityKind k) noexcept {
  switch (k) {
    case DensityKind::uniform: return "uniform";
    case DensityKind::borg: return "borg";
    case DensityKind::oscillating: return "oscillating";
    case DensityKind::annulus: return "annulus";
    case DensityKind::expression: return "expression";
  }
  return "?";
}

Density Density::uniform(double a) { return Density(DensityKind::uniform, IntervalDomain(a)); }

Density Density::borg(double alpha) {
  if (!(alpha > -1.0) || !std::isfinite(alpha)) throw ParameterError("borg density requires alpha > -1");
  Density d(DensityKind::borg, IntervalDomain(1.0));
  d.param_ = alpha;
  return d;
}

Density Density::oscillating(double eps, double phase) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ParameterError("oscillating density requires epsilon > 0");
  if (!std::isfinite(phase)) throw ParameterError("oscillating density phase must be finite");
  Density d(DensityKind::oscillating, IntervalDomain(1.0));
  d.param_ = eps;
  d.phase_ = phase;
  return d;
}

Density Density::annulus(double r_min) {
  if (!(r_min > 0.0 && r_min < 1.0)) throw ParameterError("annulus requires 0 < rmin < 1");
  const double a = std::log(1.0 / r_min);
  Density d(DensityKind::annulus, IntervalDomain(a));
  d.rect_ = RectangleDomain(a, 2.0 * std::numbers::pi);
  d.param_ = r_min;
  return d;
}

Density Density::expression(expr::BoundExpression e, double a) {
  Density d(DensityKind::expression, IntervalDomain(a));
  d.expr_ = std::move(e);
  return d;
}

template <class T>
T Density::eval(T x) const {
  using std::exp;
  using std::sin;
  switch (kind_) {
    case DensityKind::uniform: return T(1.0);
    case DensityKind::borg: {
      const T s = T(1.0) + param_ * (x + 0.5);
      const T s2 = s * s;
      return T((1.0 + param_) * (1.0 + param_)) / (s2 * s2);
    }
    case DensityKind::oscillating:
      return T(2.0) + sin(2.0 * std::numbers::pi * (x + 0.5) / param_ + phase_);
    case DensityKind::annulus: return param_ * exp(2.0 * x);
    case DensityKind::expression: break;
  }
  if constexpr (std::is_same_v<T, Dual>) return expr_->with_derivative(x.v);
  else return (*expr_)(x);
}

double Density::operator()(double x) const {
  interval_.check(x);
  return eval(x);
}

Dual Density::value_and_derivative(double x) const {
  interval_.check(x);
  return eval(Dual{x, 1.0});
}

std::string Density::describe() const {
  std::ostringstream os;
  os.precision(15);
  switch (kind_) {
    case DensityKind::uniform: os << "uniform(a=" << interval_.a << ")"; break;
    case DensityKind::borg: os << "borg(alpha=" << param_ << ")"; break;
    case DensityKind::oscillating:
      os << "oscillating(epsilon=" << param_;
      if (phase_ != 0.0) os << ", phase=" << phase_;
      os << ")";
      break;
    case DensityKind::annulus: os << "annulus(rmin=" << param_ << ")"; break;
    case DensityKind::expression:
      os << "expression(\"" << expr_->expression().source() << "\", length=" << interval_.a;
      for (const auto& [k, v] : expr_->bindings()) os << ", " << k << "=" << v;
      os << ")";
      break;
  }
  return os.str();
}

Density make_builtin(std::string_view name, const expr::ParamMap& params) {
  auto get = [&](std::string_view key, std::optional<double> fallback) {
    if (auto it = params.find(key); it != params.end()) return it->second;
    if (fallback) return *fallback;
    throw ParameterError("builtin '" + std::string(name) + "' needs parameter '" + std::string(key) + "'");
  };
  if (name == "uniform") return Density::uniform(get("length", 1.0));
  if (name == "borg") return Density::borg(get("alpha", std::nullopt));
  if (name == "oscillating") return Density::oscillating(get("epsilon", std::nullopt), get("phase", 0.0));
  if (name == "annulus") return Density::annulus(get("rmin", std::nullopt));
  throw ParameterError("unknown builtin density '" + std::string(name) + "'");
}

std::vector<double> density_breakpoints(const Density& d) {
  std::vector<double> out;
  if (d.kind() != DensityKind::oscillating) return out;
  const auto& dom = d.interval();
  const double eps = d.parameter();
  const auto n = static_cast<std::size_t>(std::min(dom.a / eps, 1e5));
  for (std::size_t i = 1; i <= n; ++i) {
    const double x = dom.lo() + eps * static_cast<double>(i);
    if (x < dom.hi()) out.push_back(x);
  }
  return out;
}

QuadratureResult density_integral(const Density& d, const QuadratureOptions& opts) {
  const auto& dom = d.interval();
  const auto splits = density_breakpoints(d);
  auto r = integrate_1d([&](double x) { return d(x); }, dom.lo(), dom.hi(), opts, splits);
  if (d.rectangle()) {
    r.value *= d.rectangle()->b;
    r.error_estimate *= d.rectangle()->b;
  }
  return r;
}

PositivityReport validate_positivity(const Density& d, std::size_t grid_points) {
  if (grid_points < 2) grid_points = 2;
  const auto& dom = d.interval();
  auto safe = [&](double x) {
    try {
      return d(x);
    } catch (const DomainError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  PositivityReport rep;
  rep.value = std::numeric_limits<double>::infinity();
  std::size_t imin = 0;
  const double h = dom.a / static_cast<double>(grid_points - 1);
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double x = i + 1 == grid_points ? dom.hi() : dom.lo() + h * static_cast<double>(i);
    const double v = safe(x);
    if (!std::isfinite(v)) return {false, x, v};
    if (v < rep.value) {
      rep.value = v;
      rep.x = x;
      imin = i;
    }
  }
  const double lo = std::max(dom.lo(), dom.lo() + h * (static_cast<double>(imin) - 1.0));
  const double hi = std::min(dom.hi(), dom.lo() + h * (static_cast<double>(imin) + 1.0));
  if (hi > lo) {
    auto [xm, vm] = boost::math::tools::brent_find_minima(safe, lo, hi, 52);
    if (vm < rep.value || !std::isfinite(vm)) {
      rep.x = xm;
      rep.value = vm;
    }
  }
  rep.ok = std::isfinite(rep.value) && rep.value > 0.0;
  return rep;
}

} // namespace sumrules
