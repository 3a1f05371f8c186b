#include <sumrules/errors.hpp>
#include <sumrules/sum_rules.hpp>

#include <boost/math/special_functions/zeta.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace sumrules {
namespace {

constexpr double kPi = std::numbers::pi;

// sum_{n > N} n^-k
double power_tail(int k, std::size_t N) {
  double head = 0.0;
  for (std::size_t n = N; n >= 1; --n) head += std::pow(static_cast<double>(n), -k);
  return boost::math::zeta(static_cast<double>(k)) - head;
}

QuadratureResult kernel_square(const Density& d, const std::function<double(double, double)>& g,
                               const QuadratureOptions& opts) {
  const auto& dom = d.interval();
  const auto splits = density_breakpoints(d);
  return integrate_2d(
      [&](double x, double y) {
        const double k = g(x, y);
        return k * k * d(x) * d(y);
      },
      dom.lo(), dom.hi(), dom.lo(), dom.hi(), opts, true, splits);
}

} // namespace

QuadratureResult trace_t1(const Density& d, BoundaryCondition bc, const SumRuleOptions& opts) {
  const auto& dom = d.interval();
  return integrate_1d([&](double x) { return eval_g0(bc, dom.a, x, x) * d(x); }, dom.lo(), dom.hi(), opts.quad_1d,
                      density_breakpoints(d));
}

QuadratureResult trace_t2(const Density& d, BoundaryCondition bc, const SumRuleOptions& opts) {
  const double a = d.length();
  return kernel_square(d, [bc, a](double x, double y) { return eval_g0(bc, a, x, y); }, opts.quad_2d);
}

QuadratureResult bilinear_b(const Density& d, BoundaryCondition bc, int q, const SumRuleOptions& opts) {
  if (!has_zero_mode(bc)) throw NoZeroModeError("bilinear zero-mode form needs Neumann or periodic conditions");
  if (q != 0 && q != 1) throw UnsupportedError("bilinear form available for q = 0 and 1");
  const auto& dom = d.interval();
  const auto splits = density_breakpoints(d);
  return integrate_2d(
      [&](double x, double y) {
        const double g = q == 0 ? eval_g0(bc, dom.a, x, y) : eval_g1(bc, dom.a, x, y);
        return d(x) * g * d(y);
      },
      dom.lo(), dom.hi(), dom.lo(), dom.hi(), opts.quad_2d, true, splits);
}

SumRuleResult z1(const Density& d, BoundaryCondition bc, const SumRuleOptions& opts) {
  SumRuleResult r;
  r.order = 1;
  r.bc = bc;
  r.problem = d.describe();
  const auto t = trace_t1(d, bc, opts);
  r.trace_term = t.value;
  r.error_estimate = t.error_estimate;
  if (has_zero_mode(bc)) {
    const auto b0 = bilinear_b(d, bc, 0, opts);
    const auto& dom = d.interval();
    const auto I = integrate_1d([&](double x) { return d(x); }, dom.lo(), dom.hi(), opts.quad_1d, density_breakpoints(d));
    r.zero_mode_subtraction = -b0.value / I.value;
    r.error_estimate += b0.error_estimate / I.value + std::abs(r.zero_mode_subtraction) * I.error_estimate / I.value;
  }
  r.value = r.trace_term + r.g1_term + r.zero_mode_subtraction;
  return r;
}

SumRuleResult z2(const Density& d, BoundaryCondition bc, const SumRuleOptions& opts) {
  SumRuleResult r;
  r.order = 2;
  r.bc = bc;
  r.problem = d.describe();
  const auto t = trace_t2(d, bc, opts);
  r.trace_term = t.value;
  r.error_estimate = t.error_estimate;
  if (has_zero_mode(bc)) {
    const double V = d.length();
    const auto b1 = bilinear_b(d, bc, 1, opts);
    r.g1_term = -2.0 / V * b1.value;
    const auto e = e0_coefficients(d, bc, opts.zero_mode);
    const double e14 = e.e1 * e.e1 * e.e1 * e.e1;
    r.zero_mode_subtraction = -(3.0 * e.e2 * e.e2 - 2.0 * e.e1 * e.e3) / e14;
    r.error_estimate += 2.0 / V * b1.error_estimate + 2.0 * e.e3_truncation_estimate / (e.e1 * e.e1 * e.e1) +
                        e.error_estimate;
    r.e0 = e;
  }
  r.value = r.trace_term + r.g1_term + r.zero_mode_subtraction;
  return r;
}

AnnulusZ2 annulus_z2(double r_min, const AnnulusOptions& opts) {
  const auto d = Density::annulus(r_min);
  const double a = d.length();
  const std::size_t N = std::max<std::size_t>(opts.angular_modes, 8);
  const std::size_t K = std::max<std::size_t>(std::min(opts.tail_terms, N / 4), 2);

  AnnulusZ2 out;
  auto base = z2(d, BoundaryCondition::neumann, opts.sum_rule);
  out.radial_trace = base.trace_term;

  // Angular modes cos(n y), sin(n y) each contribute the squared kernel of -d^2 + n^2.
  std::vector<double> per_mode(N + 1, 0.0);
  double err = base.error_estimate;
  for (std::size_t n = 1; n <= N; ++n) {
    const double eta = static_cast<double>(n * n);
    const auto t = kernel_square(d, [a, eta](double x, double y) { return shifted_neumann_kernel(a, eta, x, y); },
                                 opts.sum_rule.quad_2d);
    per_mode[n] = t.value;
    err += 2.0 * t.error_estimate;
  }
  double sum = 0.0;
  for (std::size_t n = N; n >= 1; --n) sum += 2.0 * per_mode[n];
  out.angular_sum = sum;

  // Tail: T(n) ~ sum_k c_k n^-k, k = 3.., fitted on the upper half of the computed modes.
  const std::size_t lo = N / 2;
  const auto rows = static_cast<Eigen::Index>(N - lo + 1);
  Eigen::MatrixXd A(rows, static_cast<Eigen::Index>(K));
  Eigen::VectorXd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double n = static_cast<double>(lo) + static_cast<double>(i);
    // Scale columns by N^k so the system is well conditioned.
    for (Eigen::Index k = 0; k < A.cols(); ++k) A(i, k) = std::pow(static_cast<double>(N) / n, 3.0 + k);
    b(i) = per_mode[static_cast<std::size_t>(n)];
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  double tail = 0.0;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    const double ck = c(k) * std::pow(static_cast<double>(N), 3.0 + k);
    out.tail_coefficients.push_back(ck);
    tail += 2.0 * ck * power_tail(3 + static_cast<int>(k), N);
  }
  out.angular_tail = tail;
  // A fit one order shorter bounds the tail model error.
  {
    const Eigen::MatrixXd A2 = A.leftCols(A.cols() - 1);
    const Eigen::VectorXd c2 = A2.colPivHouseholderQr().solve(b);
    double tail2 = 0.0;
    for (Eigen::Index k = 0; k < c2.size(); ++k)
      tail2 += 2.0 * c2(k) * std::pow(static_cast<double>(N), 3.0 + k) * power_tail(3 + static_cast<int>(k), N);
    err += std::abs(tail2 - tail);
  }

  auto& r = out.result;
  r = base;
  r.problem = "annulus(rmin=" + std::to_string(r_min) + ")";
  r.trace_term = base.trace_term + out.angular_sum + out.angular_tail;
  r.value = r.trace_term + r.g1_term + r.zero_mode_subtraction;
  r.error_estimate = err;
  out.without_zero_mode = r.trace_term;
  return out;
}

double annulus_limit() noexcept { return 5.0 * kPi * kPi / 48.0 - 155.0 / 192.0; }

double annulus_asymptotic(double r_min) noexcept { return annulus_limit() + 139.0 * r_min * r_min / 96.0; }

E0Reference oscillating_e0_reference(double eps) {
  if (!(eps > 0.0)) throw ParameterError("epsilon must be positive");
  const double pi = kPi;
  const double p2 = pi * pi;
  const double p3 = p2 * pi;
  const double p4 = p2 * p2;
  const double p5 = p4 * pi;
  const double e = eps;
  const double e2 = e * e;
  const double e3 = e2 * e;
  const double e4 = e2 * e2;
  const double e5 = e4 * e;
  const double s1 = std::sin(pi / e);
  const double den = e * s1 * s1 + 2.0 * pi;
  E0Reference r;
  r.e1 = pi / den;
  r.e2 = e2 *
         (18.0 * e2 - 8.0 * (3.0 * e2 + p2) * std::cos(2.0 * pi / e) + (6.0 * e2 - 4.0 * p2) * std::cos(4.0 * pi / e) +
          9.0 * pi * e * std::sin(4.0 * pi / e) - 24.0 * p2) /
         (96.0 * pi * den * den * den);
  const double c2 = std::cos(2.0 * pi / e);
  const double c4 = std::cos(4.0 * pi / e);
  const double c6 = std::cos(6.0 * pi / e);
  const double c8 = std::cos(8.0 * pi / e);
  const double sn2 = std::sin(2.0 * pi / e);
  const double sn4 = std::sin(4.0 * pi / e);
  const double sn6 = std::sin(6.0 * pi / e);
  const double sn8 = std::sin(8.0 * pi / e);
  const double poly = e3 - 94.0 * pi * e2 + 20.0 * p2 * e + 32.0 * p3;
  const double bracket =
      45.0 * pi * (e2 - 16.0 * p2) * e2 * sn8 - 24.0 * (15.0 * e4 + 35.0 * p2 * e2 - 8.0 * p4) * e * c8 -
      180.0 * pi * poly * e * sn2 - 90.0 * pi * (-3.0 * e3 + 376.0 * pi * e2 + 192.0 * p2 * e + 64.0 * p3) * e * sn4 -
      180.0 * pi * poly * e * sn6 +
      24.0 * (-420.0 * e5 - 2160.0 * pi * e4 - 95.0 * p2 * e3 + 384.0 * p4 * e + 64.0 * p5) * c4 +
      24.0 * (840.0 * e4 + 5400.0 * pi * e3 + 445.0 * p2 * e2 - 1860.0 * p3 * e + 712.0 * p4) * e * c2 -
      40.0 * (315.0 * e5 + 2160.0 * pi * e4 + 150.0 * p2 * e3 - 1464.0 * p3 * e2 - 600.0 * p4 * e + 64.0 * p5) +
      8.0 * (360.0 * e5 + 1080.0 * pi * e4 - 195.0 * p2 * e3 - 1740.0 * p3 * e2 + 168.0 * p4 * e + 128.0 * p5) * c6;
  const double d5 = e - e * c2 + 4.0 * pi;
  r.e3 = e3 * bracket / (5760.0 * p3 * std::pow(d5, 5));
  return r;
}

E0Reference oscillating_e0_leading(double eps) {
  const double pi = kPi;
  const double e = eps;
  const double s1 = std::sin(pi / e);
  E0Reference r;
  r.e1 = 0.5 - e * s1 * s1 / (4.0 * pi);
  r.e2 = -e * e * (2.0 * std::cos(2.0 * pi / e) + std::cos(4.0 * pi / e) + 6.0) / (192.0 * pi * pi);
  r.e3 = e * e * e * (3.0 * std::cos(4.0 * pi / e) + 2.0 * std::cos(6.0 * pi / e) - 5.0) / (11520.0 * pi * pi * pi);
  return r;
}

AnnulusPrinted annulus_printed_terms(double r) {
  if (!(r > 0.0 && r < 1.0)) throw ParameterError("annulus requires 0 < rmin < 1");
  const double L = std::log(r);
  const double L2 = L * L;
  const double r2 = r * r;
  const double r4 = r2 * r2;
  const double r6 = r4 * r2;
  const double r8 = r4 * r4;
  const double q = r2 - 1.0;
  AnnulusPrinted p;
  p.e1 = -L / (1.0 - r2);
  p.e2 = L * (6.0 * q * q + L * (-9.0 * r4 + 4.0 * (r4 + r2 + 1.0) * L + 9.0)) / (6.0 * std::pow(1.0 - r2, 3));
  p.e3 = -(r2 + 1.0) * L2 / (16.0 * q * q) + L / (2.0 - 2.0 * r2) +
         (14.0 * r4 + 41.0 * r2 + 14.0) * L2 * L / (12.0 * q * q * q) -
         (2.0 * r6 + 7.0 * r4 + 7.0 * r2 + 2.0) * L2 * L2 / (2.0 * q * q * q * q) +
         2.0 * (2.0 * r8 + 7.0 * r6 + 12.0 * r4 + 7.0 * r2 + 2.0) * L2 * L2 * L / (15.0 * std::pow(q, 5));
  p.g1_term = r4 / 12.0 - r4 * L2 / 90.0 + 3.0 * r4 / (32.0 * L2) - 5.0 * r4 / (32.0 * L) + r2 / 12.0 -
              7.0 * r2 * L2 / 360.0 - 3.0 * r2 / (16.0 * L2) - L2 / 90.0 + 3.0 / (32.0 * L2) + 5.0 / (32.0 * L) +
              1.0 / 12.0;
  return p;
}

ReferenceValue reference_value(std::string_view problem, const expr::ParamMap& params, BoundaryCondition bc,
                               int order) {
  if (order != 1 && order != 2) throw UnsupportedError("reference values exist for orders 1 and 2");
  auto get = [&](std::string_view key, double fallback, bool required) {
    if (auto it = params.find(key); it != params.end()) return it->second;
    if (required) throw ParameterError("reference value needs parameter '" + std::string(key) + "'");
    return fallback;
  };
  auto uncatalogued = [&]() -> ReferenceValue {
    throw UnsupportedError("no closed form catalogued for " + std::string(problem) + " with " +
                           std::string(to_string(bc)) + " conditions at order " + std::to_string(order));
  };
  if (problem == "uniform") {
    const double a = get("length", 1.0, false);
    const double a2 = a * a;
    if (bc == BoundaryCondition::periodic)
      return order == 1 ? ReferenceValue{a2 / 12.0, true, "a^2/12"} : ReferenceValue{a2 * a2 / 720.0, true, "a^4/720"};
    return order == 1 ? ReferenceValue{a2 / 6.0, true, "a^2/6"} : ReferenceValue{a2 * a2 / 90.0, true, "a^4/90"};
  }
  if (problem == "borg") {
    const double al = get("alpha", 0.0, true);
    if (!(al > -1.0)) throw ParameterError("borg density requires alpha > -1");
    const double q = al * al + 3.0 * al + 3.0;
    switch (bc) {
      case BoundaryCondition::dirichlet:
        return order == 1 ? ReferenceValue{1.0 / 6.0, true, "1/6"} : ReferenceValue{1.0 / 90.0, true, "1/90"};
      case BoundaryCondition::neumann:
        if (order == 1) return {(al * al + 5.0 * al + 5.0) / (10.0 * q), true, "(a^2+5a+5)/(10(a^2+3a+3))"};
        return {(((al + 10.0) * al + 45.0) * al * al + 70.0 * al + 35.0) / (350.0 * q * q), true,
                "(a^4+10a^3+45a^2+70a+35)/(350(a^2+3a+3)^2)"};
      case BoundaryCondition::periodic:
        if (order == 1)
          return {(5.0 * q * q - al * al * (al * (5.0 * al + 12.0) + 12.0)) / (180.0 * (al + 1.0) * q), true,
                  "(5(a^2+3a+3)^2-a^2(5a^2+12a+12))/(180(a+1)(a^2+3a+3))"};
        return {(((24.0 * al + 100.0) * al + 205.0) * al * al + 210.0 * al + 105.0) / (8400.0 * q * q), true,
                "(24a^4+100a^3+205a^2+210a+105)/(8400(a^2+3a+3)^2)"};
    }
  }
  if (problem == "oscillating") {
    const double e = get("epsilon", 0.0, true);
    if (get("phase", 0.0, false) != 0.0 || bc != BoundaryCondition::neumann) return uncatalogued();
    if (!(e > 0.0)) throw ParameterError("epsilon must be positive");
    const double pi = kPi;
    if (order == 1) {
      const double s = std::sin(pi / e);
      // Trace term int (x^2 + 1/12) Sigma. The printed form carries sin(2 pi/eps)
      // as the outer factor, which only agrees when 1/eps is an integer.
      const double t1 =
          (e * s * ((2.0 * pi * pi - 3.0 * e * e) * s + 3.0 * pi * e * std::cos(pi / e)) + 2.0 * pi * pi * pi) /
          (6.0 * pi * pi * pi);
      const double t2 = e * e *
                        (18.0 * e * e - 8.0 * (3.0 * e * e + pi * pi) * std::cos(2.0 * pi / e) +
                         (6.0 * e * e - 4.0 * pi * pi) * std::cos(4.0 * pi / e) + 9.0 * pi * e * std::sin(4.0 * pi / e) -
                         24.0 * pi * pi) /
                        (96.0 * pi * pi * pi * (e * s * s + 2.0 * pi));
      return {t1 + t2, true, "Z1(epsilon) closed form"};
    }
    if (e == 1.0)
      return {2.0 / 45.0 - 271.0 / (256.0 * pi * pi * pi * pi) + 1.0 / (24.0 * pi * pi), true,
              "2/45 - 271/(256 pi^4) + 1/(24 pi^2)"};
    // Re-derived from the boundary and diagonal terms of T2 and B1; the printed
    // expansion agrees with this only when 1/eps is an integer. Error O(eps^3).
    const double c2 = std::cos(2.0 * pi / e);
    return {2.0 / 45.0 + 2.0 * e * (1.0 - c2) / (45.0 * pi) +
                e * e * (12.0 * c2 * c2 - 24.0 * c2 + 42.0) / (720.0 * pi * pi),
            false, "small-epsilon expansion of Z2"};
  }
  if (problem == "annulus") {
    if (order != 2 || bc != BoundaryCondition::neumann) return uncatalogued();
    return {annulus_asymptotic(get("rmin", 0.0, true)), false, "5 pi^2/48 - 155/192 + 139 r^2/96"};
  }
  if (problem == "disk") {
    if (order != 2 || bc != BoundaryCondition::neumann) return uncatalogued();
    return {annulus_limit(), false, "5 pi^2/48 - 155/192"};
  }
  return uncatalogued();
}

} // namespace sumrules
