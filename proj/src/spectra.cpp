#include <sumrules/errors.hpp>
#include <sumrules/spectra.hpp>

#include <boost/math/special_functions/bessel_prime.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace sumrules {
namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kPi = std::numbers::pi;

using State1 = std::array<double, 1>;
using State2 = std::array<double, 2>;

// Root of a monotone-increasing f in [lo, hi] to relative width rel_tol.
template <class F>
std::pair<double, double> refine(F&& f, double lo, double hi, double flo, double fhi, double rel_tol,
                                 std::uintmax_t& calls) {
  auto tol = [rel_tol](double a, double b) { return std::abs(b - a) <= rel_tol * std::max(std::abs(a), std::abs(b)); };
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  calls += iters;
  return r;
}

double sqrt_sigma_length(const Density& d) {
  const auto& dom = d.interval();
  return integrate_1d([&](double x) { return std::sqrt(d(x)); }, dom.lo(), dom.hi(), kDefault1d,
                      density_breakpoints(d))
      .value;
}

} // namespace

std::string_view to_string(SpectrumMethod m) noexcept {
  switch (m) {
    case SpectrumMethod::pruefer: return "pruefer";
    case SpectrumMethod::monodromy: return "monodromy";
    case SpectrumMethod::rayleigh_ritz: return "rayleigh-ritz";
    case SpectrumMethod::bessel: return "bessel";
  }
  return "?";
}

SpectrumMethod parse_method(std::string_view t) {
  if (t == "pruefer" || t == "prufer") return SpectrumMethod::pruefer;
  if (t == "monodromy") return SpectrumMethod::monodromy;
  if (t == "rayleigh-ritz" || t == "rr") return SpectrumMethod::rayleigh_ritz;
  if (t == "bessel") return SpectrumMethod::bessel;
  throw ParameterError("unknown spectrum method '" + std::string(t) + "'");
}

std::size_t Spectrum::count() const noexcept {
  std::size_t n = 0;
  for (const auto& e : entries) n += static_cast<std::size_t>(e.multiplicity);
  return n;
}

std::vector<double> Spectrum::values() const {
  std::vector<double> v;
  v.reserve(count());
  for (const auto& e : entries)
    for (int i = 0; i < e.multiplicity; ++i) v.push_back(e.value);
  return v;
}

double Spectrum::partial_sum(int p) const {
  double s = 0.0;
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) s += it->multiplicity * std::pow(it->value, -p);
  return s;
}

namespace {

// theta = sqrt(E) tau + phi with tau' = sqrt(Sigma): only the small offset phi
// is integrated, so the error control is not swamped by the growing phase.
//   phi'     = g sin(2 theta),                 g = Sigma' / (4 Sigma)
//   log rho' = -g cos(2 theta)
// and the E-derivatives psi = dtheta/dE, chi = dlog(rho)/dE:
//   psi' = sqrt(Sigma) / (2 sqrt(E)) + 2 g cos(2 theta) psi
//   chi' = 2 g sin(2 theta) psi
struct PhaseEnd {
  double theta;
  double dtheta_dE;
  double log_rho;
  double dlog_rho_dE;
};

PhaseEnd integrate_phase(const Density& d, double E, double theta0, const ShootingOptions& opts) {
  const auto& dom = d.interval();
  const double k = std::sqrt(E);
  using State = std::array<double, 5>;
  auto rhs = [&](const State& s, State& ds, double x) {
    const Dual v = d.value_and_derivative(std::clamp(x, dom.lo(), dom.hi()));
    const double root = std::sqrt(v.v);
    const double g = v.d / (4.0 * v.v);
    const double th2 = 2.0 * (k * s[0] + s[1] + theta0);
    const double sn = std::sin(th2);
    const double cs = std::cos(th2);
    ds[0] = root;
    ds[1] = g * sn;
    ds[2] = root / (2.0 * k) + 2.0 * g * cs * s[2];
    ds[3] = -g * cs;
    ds[4] = 2.0 * g * sn * s[2];
  };
  State s{};
  const double h0 = std::min(dom.a / 64.0, 0.1 / std::max(k, 1.0));
  auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(opts.ode_abs_tol, opts.ode_rel_tol);
  odeint::integrate_adaptive(stepper, rhs, s, dom.lo(), dom.hi(), h0);
  return {theta0 + k * s[0] + s[1], s[2], s[3], s[4]};
}

// Error the ODE tolerances leave in an eigenvalue, whatever the root finder
// reports. At the defaults the worst case measured up to n = 2000 is 7e-11 E.
double ode_floor(double E, const ShootingOptions& opts) { return 1e3 * opts.ode_rel_tol * std::abs(E); }

double theta_start(BoundaryCondition bc) { return bc == BoundaryCondition::dirichlet ? 0.0 : 0.5 * kPi; }

// Root of f in (lo, hi), sign(f(lo)) != sign(f(hi)), by Newton steps kept
// inside the shrinking bracket. fd(E) returns {f, f'}.
template <class F>
std::pair<double, double> safe_newton(F&& fd, double lo, double hi, double guess, bool increasing, double rel_tol) {
  double E = guess;
  if (!(E > lo && E < hi)) E = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const auto [f, df] = fd(E);
    if (f == 0.0) return {E, 0.0};
    if ((f < 0.0) == increasing) lo = E;
    else hi = E;
    double next = E - f / df;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - E);
    E = next;
    if (step <= rel_tol * std::abs(E)) return {E, std::max(step, 1e-15 * std::abs(E))};
    if (hi - lo <= rel_tol * std::abs(hi)) return {0.5 * (lo + hi), 0.5 * (hi - lo)};
  }
  throw BracketingError("safeguarded Newton did not converge");
}

// n-th non-zero eigenvalue from theta(a/2; E) = theta0 + n pi; theta increases with E.
SpectrumEntry shoot(const Density& d, BoundaryCondition bc, int n, double guess, double lower,
                    const ShootingOptions& opts) {
  const double theta0 = theta_start(bc);
  const double target = theta0 + kPi * n;
  auto fd = [&](double E) {
    const auto r = integrate_phase(d, E, theta0, opts);
    return std::pair{r.theta - target, r.dtheta_dE};
  };
  // Newton from the guess; the upper bracket end is found lazily by doubling.
  double hi = std::numeric_limits<double>::infinity();
  double E = std::max(guess, lower * (1.0 + 1e-9));
  for (int it = 0; it < 200; ++it) {
    const auto [f, df] = fd(E);
    if (f < 0.0) lower = std::max(lower, E);
    else hi = std::min(hi, E);
    double next = E - f / df;
    if (!(next > lower && next < hi) || !std::isfinite(next))
      next = std::isfinite(hi) ? 0.5 * (lower + hi) : 2.0 * E - lower;
    const double step = std::abs(next - E);
    E = next;
    if (step <= opts.rel_tol * E) return {E, 1, std::max(step, ode_floor(E, opts)), n, 0};
    if (std::isfinite(hi) && hi - lower <= opts.rel_tol * hi)
      return {0.5 * (lower + hi), 1, std::max(0.5 * (hi - lower), ode_floor(hi, opts)), n, 0};
  }
  throw BracketingError("eigenvalue " + std::to_string(n) + " did not converge");
}

std::vector<SpectrumEntry> shoot_sequence(const Density& d, BoundaryCondition bc, std::size_t count,
                                          const ShootingOptions& opts) {
  const double L = sqrt_sigma_length(d);
  std::vector<SpectrumEntry> out;
  out.reserve(count);
  double prev = 0.0;
  for (std::size_t n = 1; n <= count; ++n) {
    double guess = std::pow(kPi * static_cast<double>(n) / L, 2);
    const std::size_t m = out.size();
    if (m >= 3) guess = 3.0 * out[m - 1].value - 3.0 * out[m - 2].value + out[m - 3].value;
    auto e = shoot(d, bc, static_cast<int>(n), guess, prev, opts);
    if (!(e.value > prev)) throw BracketingError("eigenvalue ordering violated at mode " + std::to_string(n));
    prev = e.value;
    out.push_back(e);
  }
  return out;
}

} // namespace

double pruefer_phase(const Density& d, BoundaryCondition bc, double E, const ShootingOptions& opts) {
  if (bc == BoundaryCondition::periodic) throw ParameterError("Pruefer shooting handles Dirichlet and Neumann only");
  if (!(E > 0.0)) throw ParameterError("Pruefer shooting needs E > 0");
  return integrate_phase(d, E, theta_start(bc), opts).theta;
}

namespace {

// Discriminant y1(a/2) + y2'(a/2) and its E-derivative. With y = R sin(theta),
// y' = R S cos(theta), S = sqrt(E Sigma), the amplitude is R = R0 sqrt(S0/S) rho.
std::pair<double, double> discriminant_and_slope(const Density& d, double E, const ShootingOptions& opts) {
  const auto& dom = d.interval();
  const double ratio = std::sqrt(std::sqrt(d(dom.lo()) / d(dom.hi())));
  const auto a = integrate_phase(d, E, 0.5 * kPi, opts);  // y(lo) = 1, y'(lo) = 0
  const auto b = integrate_phase(d, E, 0.0, opts);        // y(lo) = 0, y'(lo) = 1
  const double ra = ratio * std::exp(a.log_rho);
  const double rb = std::exp(b.log_rho) / ratio;
  const double y1 = ra * std::sin(a.theta);
  const double dy2 = rb * std::cos(b.theta);
  const double slope = y1 * a.dlog_rho_dE + ra * std::cos(a.theta) * a.dtheta_dE + dy2 * b.dlog_rho_dE -
                       rb * std::sin(b.theta) * b.dtheta_dE;
  return {y1 + dy2, slope};
}

double extrapolate(const std::vector<double>& v, double fallback) {
  const std::size_t m = v.size();
  return m >= 3 ? 3.0 * v[m - 1] - 3.0 * v[m - 2] + v[m - 3] : fallback;
}

} // namespace

double floquet_discriminant(const Density& d, double E, const ShootingOptions& opts) {
  if (!(E > 0.0)) throw ParameterError("discriminant needs E > 0");
  return discriminant_and_slope(d, E, opts).first;
}

Spectrum sl_spectrum(const Density& d, BoundaryCondition bc, std::size_t count, SpectrumMethod method,
                     const ShootingOptions& opts) {
  if (count < 1) throw ParameterError("spectrum count must be >= 1");
  if (bc == BoundaryCondition::periodic) {
    if (method != SpectrumMethod::monodromy) throw ParameterError("periodic spectra use the monodromy method");
  } else if (method != SpectrumMethod::pruefer) {
    throw ParameterError("Dirichlet and Neumann spectra use the pruefer method");
  }
  Spectrum out;
  out.method = method;
  out.bc = bc;
  out.zero_mode_removed = has_zero_mode(bc);
  if (bc != BoundaryCondition::periodic) {
    out.entries = shoot_sequence(d, bc, count, opts);
    return out;
  }

  // Periodic level j: the pair lies in [mu_{2j-1}, mu_{2j+1}] around the Dirichlet
  // eigenvalue mu_{2j}, where D(E) - 2 >= 0. D rises through 2 below mu_{2j}
  // and falls through 2 above it.
  const std::size_t levels = (count + 1) / 2;
  const auto mu = shoot_sequence(d, BoundaryCondition::dirichlet, 2 * levels + 1, opts);
  auto fd = [&](double E) {
    auto [D, slope] = discriminant_and_slope(d, E, opts);
    return std::pair{D - 2.0, slope};
  };
  std::vector<double> lows;
  std::vector<double> highs;
  const double touch_tol = 1e-9;
  for (std::size_t j = 1; j <= levels && out.entries.size() < count; ++j) {
    const double below = mu[2 * j - 2].value;
    const double mid = mu[2 * j - 1].value;
    const double above = mu[2 * j].value;
    const double fm = fd(mid).first;
    SpectrumEntry lower{mid, 1, mu[2 * j - 1].accuracy, static_cast<int>(j), 0};
    SpectrumEntry upper{mid, 1, mu[2 * j - 1].accuracy, static_cast<int>(j), 1};
    if (fm > touch_tol) {
      const auto lo_root = safe_newton(fd, below, mid, extrapolate(lows, 0.5 * (below + mid)), true, opts.rel_tol);
      const auto hi_root = safe_newton(fd, mid, above, extrapolate(highs, 0.5 * (mid + above)), false, opts.rel_tol);
      lower.value = lo_root.first;
      lower.accuracy = std::max(lo_root.second, ode_floor(lower.value, opts));
      upper.value = hi_root.first;
      upper.accuracy = std::max(hi_root.second, ode_floor(upper.value, opts));
    } else {
      // Touching pair: the monodromy map is the identity at mid to working accuracy.
      const double width = std::sqrt(std::max(fm, 0.0) + touch_tol) * std::sqrt(mid);
      lower.accuracy = upper.accuracy = std::max(mu[2 * j - 1].accuracy, width);
    }
    lows.push_back(lower.value);
    highs.push_back(upper.value);
    out.entries.push_back(lower);
    if (out.entries.size() < count) out.entries.push_back(upper);
  }
  return out;
}

Eigen::VectorXd generalized_sym_eig(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw ParameterError("generalized_sym_eig: matrices must be square and equal in size");
  Eigen::LLT<Eigen::MatrixXd> llt(B);
  if (llt.info() != Eigen::Success) throw EigenSolverError("Cholesky breakdown: mass matrix not positive definite");
  // Reduce to L^-1 A L^-T and diagonalise the symmetric standard problem.
  const Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd C = L.triangularView<Eigen::Lower>().solve(A);
  C = L.triangularView<Eigen::Lower>().solve(C.transpose()).transpose();
  C = 0.5 * (C + C.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw EigenSolverError("symmetric eigensolver did not converge");
  return es.eigenvalues();
}

Spectrum rayleigh_ritz(const MatrixElementTable& t) {
  if (t.size() < 2) throw ParameterError("Rayleigh-Ritz needs at least two basis functions");
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(t.size()), static_cast<Eigen::Index>(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i) A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = t.eps[i];
  const auto lam = generalized_sym_eig(A, t.S);
  Spectrum out;
  out.method = SpectrumMethod::rayleigh_ritz;
  out.bc = t.bc;
  out.zero_mode_removed = has_zero_mode(t.bc);
  const Eigen::Index first = out.zero_mode_removed ? 1 : 0;
  for (Eigen::Index i = first; i < lam.size(); ++i)
    out.entries.push_back({lam(i), 1, 0.0, static_cast<int>(i - first + 1), 0});
  return out;
}

Spectrum rayleigh_ritz(const Density& d, BoundaryCondition bc, std::size_t M) {
  if (M < 2) throw ParameterError("Rayleigh-Ritz needs at least two basis functions");
  return rayleigh_ritz(matrix_elements(d, bc, M));
}

namespace {

using OverflowIgnore = boost::math::policies::policy<boost::math::policies::overflow_error<boost::math::policies::ignore_error>>;

// (J_n'(x), Y_n'(x)) scaled to unit length; the direction is all the cross product needs.
std::pair<double, double> unit_deriv(int n, double x) {
  const double j = boost::math::cyl_bessel_j_prime(n, x, OverflowIgnore());
  const double y = boost::math::cyl_neumann_prime(n, x, OverflowIgnore());
  if (!std::isfinite(y)) return {0.0, 1.0};
  const double m = std::hypot(j, y);
  return {j / m, y / m};
}

double bessel_target(int n, double x, double r) {
  if (r <= 0.0) return boost::math::cyl_bessel_j_prime(n, x);
  const auto [ci, si] = unit_deriv(n, r * x);
  const auto [co, so] = unit_deriv(n, x);
  return ci * so - co * si;
}

// All roots below xmax (or the first k when k > 0).
std::vector<std::pair<double, double>> scan_roots(int n, double r, double xmax, std::size_t k) {
  std::vector<std::pair<double, double>> roots;
  const double step = 0.25;
  double x = r <= 0.0 && n > 0 ? static_cast<double>(n) : 1e-3;
  if (r > 0.0 && n > 0) x = std::max(1e-3, static_cast<double>(n) * 0.5);
  double fx = bessel_target(n, x, r);
  std::uintmax_t calls = 0;
  while ((k == 0 && x < xmax) || (k > 0 && roots.size() < k)) {
    const double xn = x + step;
    const double fn = bessel_target(n, xn, r);
    if (fx == 0.0) {
      roots.emplace_back(x, 0.0);
    } else if ((fx < 0.0) != (fn < 0.0) && fn != 0.0) {
      auto g = [&](double t) { return bessel_target(n, t, r); };
      auto [a, b] = refine(g, x, xn, fx, fn, 1e-14, calls);
      const double root = 0.5 * (a + b);
      if (k > 0 || root < xmax) roots.emplace_back(root, 0.5 * (b - a));
    }
    x = xn;
    fx = fn;
    if (x > 1e7) throw BracketingError("Bessel root scan exhausted");
  }
  return roots;
}

} // namespace

std::vector<double> bessel_deriv_roots(int n, std::size_t k, double r_min) {
  if (n < 0) throw ParameterError("Bessel order must be >= 0");
  if (k < 1) throw ParameterError("root count must be >= 1");
  if (!(r_min >= 0.0 && r_min < 1.0)) throw ParameterError("inner radius must lie in [0, 1)");
  std::vector<double> out;
  for (const auto& [x, err] : scan_roots(n, r_min, 0.0, k)) out.push_back(x);
  return out;
}

Spectrum disk_annulus_spectrum(double r_min, std::size_t count) {
  if (!(r_min >= 0.0 && r_min < 1.0)) throw ParameterError("inner radius must lie in [0, 1)");
  if (count < 1) throw ParameterError("spectrum count must be >= 1");
  // Weyl estimate N(E) ~ (area E + perimeter sqrt(E)) / (4 pi) sets the scan range.
  const double area = kPi * (1.0 - r_min * r_min);
  const double perimeter = 2.0 * kPi * (1.0 + r_min);
  double target = 1.1 * static_cast<double>(count) + 20.0;
  for (int attempt = 0; attempt < 20; ++attempt) {
    const double q = perimeter / (2.0 * area);
    const double sqrtE = -q + std::sqrt(q * q + 4.0 * kPi * target / area);
    const double xmax = sqrtE;
    std::vector<SpectrumEntry> levels;
    // Angular order n contributes only above E = n^2.
    for (int n = 0; n <= static_cast<int>(std::ceil(xmax)); ++n) {
      const auto roots = scan_roots(n, r_min, xmax, 0);
      int k = 1;
      for (const auto& [x, err] : roots) {
        levels.push_back({x * x, n == 0 ? 1 : 2, 2.0 * x * std::max(err, 1e-15 * x), n, k});
        ++k;
      }
    }
    std::sort(levels.begin(), levels.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
      return a.value != b.value ? a.value < b.value : a.level < b.level;
    });
    std::size_t total = 0;
    for (const auto& l : levels) total += static_cast<std::size_t>(l.multiplicity);
    if (total < count) {
      target *= 1.3;
      continue;
    }
    Spectrum out;
    out.method = SpectrumMethod::bessel;
    out.bc = BoundaryCondition::neumann;
    out.zero_mode_removed = true;
    std::size_t have = 0;
    for (auto l : levels) {
      if (have >= count) break;
      l.multiplicity = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(l.multiplicity), count - have));
      have += static_cast<std::size_t>(l.multiplicity);
      out.entries.push_back(l);
    }
    return out;
  }
  throw BracketingError("Bessel spectrum scan did not reach the requested count");
}

} // namespace sumrules
