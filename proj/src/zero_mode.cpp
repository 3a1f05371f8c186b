#include <sumrules/errors.hpp>
#include <sumrules/zero_mode.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sumrules {
namespace {

// Panel edges at every period of cos(freq theta), merged with the density's own.
std::vector<double> periodic_splits(const Density& d, int freq) {
  auto out = density_breakpoints(d);
  const auto& dom = d.interval();
  if (freq > 1) {
    const double period = 2.0 * dom.a / freq;
    for (int j = 1; j < freq / 2 + 1; ++j) {
      const double x = dom.lo() + period * j;
      if (x < dom.hi()) out.push_back(x);
    }
  }
  return out;
}

// int Sigma(x) trig(j theta) dx for j = 0..jmax.
struct FourierMoments {
  std::vector<double> c;
  std::vector<double> s;
};

FourierMoments fourier_moments(const Density& d, int jmax, const QuadratureOptions& opts) {
  const auto& dom = d.interval();
  const double k = std::numbers::pi / dom.a;
  FourierMoments m;
  m.c.resize(static_cast<std::size_t>(jmax) + 1);
  m.s.resize(static_cast<std::size_t>(jmax) + 1);
  for (int j = 0; j <= jmax; ++j) {
    const auto splits = periodic_splits(d, j);
    m.c[j] = integrate_1d([&](double x) { return d(x) * std::cos(j * k * (x - dom.lo())); }, dom.lo(), dom.hi(),
                          opts, splits)
                 .value;
    m.s[j] = j == 0 ? 0.0
                    : integrate_1d([&](double x) { return d(x) * std::sin(j * k * (x - dom.lo())); }, dom.lo(),
                                   dom.hi(), opts, splits)
                          .value;
  }
  return m;
}

// sum_f ccos[f] cos(f theta) + csin[f] sin(f theta).
struct TrigSeries {
  std::vector<double> ccos;
  std::vector<double> csin;

  double operator()(double theta) const {
    double acc = 0.0;
    double c = 1.0;
    double s = 0.0;
    const double cr = std::cos(theta);
    const double sr = std::sin(theta);
    for (std::size_t f = 0; f < ccos.size(); ++f) {
      if (f > 0) {
        if (f % 64 == 0) {
          // Re-anchor so rotation roundoff does not accumulate.
          c = std::cos(static_cast<double>(f) * theta);
          s = std::sin(static_cast<double>(f) * theta);
        } else {
          const double cn = c * cr - s * sr;
          s = s * cr + c * sr;
          c = cn;
        }
      }
      acc += ccos[f] * c + csin[f] * s;
    }
    return acc;
  }
};

TrigSeries series_from_modes(const BasisTable& basis, std::span<const double> coeffs) {
  int fmax = 0;
  for (std::size_t m = 0; m < coeffs.size(); ++m) fmax = std::max(fmax, basis.function(m).freq);
  TrigSeries t;
  t.ccos.assign(static_cast<std::size_t>(fmax) + 1, 0.0);
  t.csin.assign(static_cast<std::size_t>(fmax) + 1, 0.0);
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    const auto f = basis.function(m);
    (f.sine ? t.csin : t.ccos)[f.freq] += f.norm * coeffs[m];
  }
  return t;
}

struct KernelIntegrals {
  double b0 = 0.0;
  double b1 = 0.0;
  double c = 0.0;
  double error = 0.0;
};

KernelIntegrals kernel_integrals(const Density& d, BoundaryCondition bc, bool need_third, const QuadratureOptions& opts) {
  const auto& dom = d.interval();
  const auto splits = density_breakpoints(d);
  QuadratureOptions inner = opts;
  inner.abs_tol = 0.1 * opts.abs_tol;
  KernelIntegrals k;
  auto r0 = integrate_1d([&](double z) { return d(z) * zero_mode_potential(d, bc, z, inner); }, dom.lo(), dom.hi(),
                         opts, splits);
  k.b0 = r0.value;
  k.error += r0.error_estimate;
  if (need_third) {
    auto r1 = integrate_1d(
        [&](double z) {
          const double u = zero_mode_potential(d, bc, z, inner);
          return u * u;
        },
        dom.lo(), dom.hi(), opts, splits);
    auto r2 = integrate_1d(
        [&](double z) {
          const double u = zero_mode_potential(d, bc, z, inner);
          return d(z) * u * u;
        },
        dom.lo(), dom.hi(), opts, splits);
    k.b1 = r1.value;
    k.c = r2.value;
    k.error += r1.error_estimate + r2.error_estimate;
  }
  return k;
}

double third_order(double e1, double e2, double V, double b0, double b1, double c) {
  const double A = b0 / V;
  const double C = c / V;
  const double D = b1 / V;
  return -2.0 * e1 * e1 * e2 * A - e1 * e1 * e1 * e1 * C + e1 * e1 * e1 * D;
}

} // namespace

std::vector<double> density_projections(const Density& d, BoundaryCondition bc, std::size_t size,
                                        const QuadratureOptions& opts) {
  const auto& dom = d.interval();
  BasisTable basis(bc, dom.a, size);
  std::vector<double> s(size);
  for (std::size_t m = 0; m < size; ++m) {
    const auto splits = periodic_splits(d, basis.function(m).freq);
    s[m] = integrate_1d([&](double x) { return d(x) * basis.value(m, x); }, dom.lo(), dom.hi(), opts, splits).value;
  }
  return s;
}

MatrixElementTable matrix_elements(const Density& d, BoundaryCondition bc, std::size_t size,
                                   const QuadratureOptions& opts) {
  if (size < 1) throw ParameterError("matrix_elements needs at least one mode");
  const auto& dom = d.interval();
  BasisTable basis(bc, dom.a, size);
  int fmax = 0;
  for (std::size_t m = 0; m < size; ++m) fmax = std::max(fmax, basis.function(m).freq);
  const auto F = fourier_moments(d, 2 * fmax, opts);
  MatrixElementTable t{bc, dom.a, Eigen::MatrixXd(size, size), std::vector<double>(size)};
  for (std::size_t m = 0; m < size; ++m) {
    t.eps[m] = basis.eigenvalue(m);
    const auto fm = basis.function(m);
    for (std::size_t n = 0; n <= m; ++n) {
      const auto fn = basis.function(n);
      const int dif = fm.freq - fn.freq;
      const auto ad = static_cast<std::size_t>(std::abs(dif));
      const auto sum = static_cast<std::size_t>(fm.freq + fn.freq);
      double v = 0.0;
      if (!fm.sine && !fn.sine) v = 0.5 * (F.c[ad] + F.c[sum]);
      else if (fm.sine && fn.sine) v = 0.5 * (F.c[ad] - F.c[sum]);
      else {
        // sin(p) cos(q) = (sin(p+q) + sin(p-q)) / 2 with p the sine frequency.
        const int p_minus_q = fm.sine ? dif : -dif;
        v = 0.5 * (F.s[sum] + (p_minus_q >= 0 ? 1.0 : -1.0) * F.s[ad]);
      }
      v *= fm.norm * fn.norm;
      t.S(m, n) = v;
      t.S(n, m) = v;
    }
  }
  return t;
}

double zero_mode_potential(const Density& d, BoundaryCondition bc, double z, const QuadratureOptions& opts) {
  const auto& dom = d.interval();
  auto splits = density_breakpoints(d);
  splits.push_back(z);
  return integrate_1d([&](double y) { return eval_g0(bc, dom.a, z, y) * d(y); }, dom.lo(), dom.hi(), opts, splits)
      .value;
}

ZeroModeExpansion e0_coefficients(const Density& d, BoundaryCondition bc, const ZeroModeOptions& opts) {
  if (!has_zero_mode(bc)) throw NoZeroModeError("Dirichlet conditions have no zero mode");
  const auto& dom = d.interval();
  ZeroModeExpansion z;
  z.volume = dom.a;
  const auto splits = density_breakpoints(d);
  auto ri = integrate_1d([&](double x) { return d(x); }, dom.lo(), dom.hi(), opts.quadrature, splits);
  z.sigma_integral = ri.value;
  z.e1 = z.volume / z.sigma_integral;

  const bool kernel = opts.route == E3Route::kernel;
  const auto k = kernel_integrals(d, bc, kernel, opts.quadrature);
  z.b0 = k.b0;
  z.e2 = -z.e1 * z.e1 * z.e1 * z.b0 / z.volume;
  z.error_estimate = ri.error_estimate + k.error;

  if (kernel) {
    z.b1 = k.b1;
    z.c = k.c;
    z.e3 = third_order(z.e1, z.e2, z.volume, z.b0, z.b1, z.c);
    return z;
  }

  BasisTable full(bc, dom.a, opts.max_modes);
  std::vector<double> s;
  auto evaluate = [&](std::size_t M) {
    const std::size_t old = s.size();
    s.resize(M);
    for (std::size_t m = old; m < M; ++m) {
      const auto sp = periodic_splits(d, full.function(m).freq);
      s[m] = integrate_1d([&](double x) { return d(x) * full.value(m, x); }, dom.lo(), dom.hi(), opts.quadrature, sp)
                 .value;
    }
    std::vector<double> w(M, 0.0);
    double D = 0.0;
    for (std::size_t m = M; m-- > full.first_nonzero();) {
      w[m] = s[m] / full.eigenvalue(m);
      D += w[m] * w[m];
    }
    const auto series = series_from_modes(full, w);
    const double kth = std::numbers::pi / dom.a;
    const double C = integrate_1d(
                         [&](double x) {
                           const double u = series(kth * (x - dom.lo()));
                           return d(x) * u * u;
                         },
                         dom.lo(), dom.hi(), opts.quadrature, splits)
                         .value;
    return std::pair{D, C};
  };

  std::size_t M = std::min(opts.initial_modes, opts.max_modes);
  auto [D, C] = evaluate(M);
  double e3 = third_order(z.e1, z.e2, z.volume, z.b0, D, C);
  double change = std::numeric_limits<double>::infinity();
  while (2 * M <= opts.max_modes) {
    auto [D2, C2] = evaluate(2 * M);
    const double e3n = third_order(z.e1, z.e2, z.volume, z.b0, D2, C2);
    change = std::abs(e3n - e3);
    M *= 2;
    D = D2;
    C = C2;
    e3 = e3n;
    if (change < opts.e3_change_tol * std::max(1.0, std::abs(e3))) break;
  }
  z.e3 = e3;
  z.b1 = D;
  z.c = C;
  z.truncation_M = M;
  z.e3_truncation_estimate = std::isfinite(change) ? change : 0.0;
  return z;
}

double shifted_eigen_oracle(const MatrixElementTable& t, double gamma) {
  if (!(gamma > 0.0)) throw ParameterError("shift must be positive");
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::VectorXd dinv(n);
  for (Eigen::Index i = 0; i < n; ++i) dinv(i) = 1.0 / std::sqrt(t.eps[i] + gamma);
  // Largest eigenvalue of D^-1/2 S D^-1/2 is 1/E0 and carries full relative accuracy.
  const Eigen::MatrixXd K = dinv.asDiagonal() * t.S * dinv.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw EigenSolverError("shifted oracle: eigensolver failed");
  const double top = es.eigenvalues()(n - 1);
  if (!(top > 0.0)) throw EigenSolverError("shifted oracle: mass matrix not positive definite");
  return 1.0 / top;
}

double shifted_eigen_oracle(const Density& d, BoundaryCondition bc, double gamma, std::size_t modes) {
  return shifted_eigen_oracle(matrix_elements(d, bc, modes), gamma);
}

double e0_series_eval(const ZeroModeExpansion& z, double gamma) noexcept {
  return gamma * (z.e1 + gamma * (z.e2 + gamma * z.e3));
}

RichardsonEstimate richardson_extract(const MatrixElementTable& table, std::array<double, 3> gammas) {
  RichardsonEstimate r;
  r.gammas = gammas;
  Eigen::Matrix3d V;
  Eigen::Vector3d rhs;
  for (int i = 0; i < 3; ++i) {
    r.energies[i] = shifted_eigen_oracle(table, gammas[i]);
    V(i, 0) = 1.0;
    V(i, 1) = gammas[i];
    V(i, 2) = gammas[i] * gammas[i];
    rhs(i) = r.energies[i] / gammas[i];
  }
  const Eigen::Vector3d c = V.colPivHouseholderQr().solve(rhs);
  r.e1 = c(0);
  r.e2 = c(1);
  r.e3 = c(2);
  return r;
}

} // namespace sumrules
