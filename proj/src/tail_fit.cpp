#include <sumrules/errors.hpp>
#include <sumrules/quadrature.hpp>
#include <sumrules/tail_fit.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace sumrules {

std::string_view to_string(IndexConvention c) noexcept {
  return c == IndexConvention::sorted ? "sorted" : "per-level";
}

double TailFit::model(double n) const {
  const double inv2 = 1.0 / (n * n);
  double tail = 0.0;
  for (std::size_t k = coefficients.size(); k-- > 2;) tail = (tail + coefficients[k]) * inv2;
  return coefficients[0] * n * n + coefficients[1] + tail;
}

namespace {

struct Series {
  std::vector<double> n;
  std::vector<double> E;
};

Series extract(const Spectrum& s, int branch) {
  Series out;
  if (branch < 0) {
    const auto v = s.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.n.push_back(static_cast<double>(i + 1));
      out.E.push_back(v[i]);
    }
    return out;
  }
  for (const auto& e : s.entries) {
    if (e.branch != branch) continue;
    out.n.push_back(static_cast<double>(e.level));
    out.E.push_back(e.value);
  }
  return out;
}

// Taylor coefficients of model(x0 + h) up to h^order.
std::vector<double> model_jet(const TailFit& f, double x0, int order) {
  std::vector<double> g(static_cast<std::size_t>(order) + 1, 0.0);
  g[0] = f.coefficients[0] * x0 * x0 + f.coefficients[1];
  if (order >= 1) g[1] = 2.0 * f.coefficients[0] * x0;
  if (order >= 2) g[2] = f.coefficients[0];
  for (std::size_t k = 2; k < f.coefficients.size(); ++k) {
    // x^-m with m = 2(k-1): coefficient of h^j is binom(-m, j) x0^(-m-j).
    const double m = 2.0 * static_cast<double>(k - 1);
    double c = f.coefficients[k] * std::pow(x0, -m);
    for (int j = 0; j <= order; ++j) {
      g[static_cast<std::size_t>(j)] += c;
      c *= (-m - j) / ((j + 1.0) * x0);
    }
  }
  return g;
}

std::vector<double> series_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> c(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; i + j < a.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

std::vector<double> series_pow_neg(const std::vector<double>& g, int p) {
  std::vector<double> r(g.size(), 0.0);
  r[0] = 1.0 / g[0];
  for (std::size_t j = 1; j < g.size(); ++j) {
    double acc = 0.0;
    for (std::size_t i = 1; i <= j; ++i) acc += g[i] * r[j - i];
    r[j] = -acc / g[0];
  }
  std::vector<double> out = r;
  for (int k = 1; k < p; ++k) out = series_mul(out, r);
  return out;
}

double accuracy_spread(const Spectrum& s, int p) {
  double err = 0.0;
  for (const auto& e : s.entries) err += e.multiplicity * p * e.accuracy * std::pow(e.value, -p - 1);
  return err;
}

} // namespace

TailFit fit_tail_1d(const Spectrum& s, int P, FitWindow window, int branch) {
  if (P < 0) throw ParameterError("number of inverse-power terms must be >= 0");
  if (branch > 1) throw ParameterError("branch must be -1, 0 or 1");
  const auto data = extract(s, branch);
  const std::size_t m = static_cast<std::size_t>(P) + 2;
  const std::size_t N = data.n.size();
  if (window.lo == 0 && window.hi == 0) {
    const std::size_t width = std::max<std::size_t>(static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(N))), m + 2);
    window.hi = N;
    window.lo = N >= width ? N - width + 1 : 1;
  }
  if (window.lo < 1 || window.hi > N || window.lo > window.hi)
    throw ParameterError("fit window lies outside the available spectrum");
  const std::size_t rows = window.hi - window.lo + 1;
  if (rows < m + 2) throw ParameterError("fit window needs at least " + std::to_string(m + 2) + " points");

  // Columns scaled by the window's largest index keep the design well conditioned.
  const double nmax = data.n[window.hi - 1];
  Eigen::MatrixXd A(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(m));
  Eigen::VectorXd b(static_cast<Eigen::Index>(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    const double u = data.n[window.lo - 1 + r] / nmax;
    const auto i = static_cast<Eigen::Index>(r);
    A(i, 0) = u * u;
    A(i, 1) = 1.0;
    for (std::size_t k = 2; k < m; ++k) A(i, static_cast<Eigen::Index>(k)) = std::pow(u, -2.0 * static_cast<double>(k - 1));
    b(i) = data.E[window.lo - 1 + r];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-14);
  if (qr.rank() < static_cast<Eigen::Index>(m)) throw FitError("tail fit design matrix is rank deficient");
  const Eigen::VectorXd beta = qr.solve(b);

  TailFit f;
  f.coefficients.resize(m);
  f.coefficients[0] = beta(0) / (nmax * nmax);
  f.coefficients[1] = beta(1);
  for (std::size_t k = 2; k < m; ++k)
    f.coefficients[k] = beta(static_cast<Eigen::Index>(k)) * std::pow(nmax, 2.0 * static_cast<double>(k - 1));
  if (!(f.coefficients[0] > 0.0)) throw FitError("tail fit produced a non-positive leading coefficient");
  f.window_lo = window.lo;
  f.window_hi = window.hi;
  f.last_index = static_cast<std::size_t>(data.n.back());
  f.rms = std::sqrt((A * beta - b).squaredNorm() / static_cast<double>(rows));
  f.convention = branch < 0 ? IndexConvention::sorted : IndexConvention::per_level;
  f.branch = branch;
  return f;
}

TailSum tail_sum(const TailFit& f, int p, std::size_t from_n) {
  if (p < 1) throw ParameterError("sum-rule order must be >= 1");
  if (f.coefficients.size() < 2 || !(f.coefficients[0] > 0.0)) throw ParameterError("tail model needs c1 > 0");
  // Direct summation to a point where the Euler-Maclaurin corrections are negligible.
  const std::size_t start = std::max<std::size_t>(from_n + 1, 64);
  std::vector<double> terms;
  for (std::size_t n = from_n + 1; n < start; ++n) {
    const double v = f.model(static_cast<double>(n));
    if (!(v > 0.0)) throw DomainError("tail model is not positive at n = " + std::to_string(n));
    terms.push_back(std::pow(v, -p));
  }
  const double M = static_cast<double>(start);
  // q(t) = model(M/t) (t/M)^2 must stay positive for t in (0, 1].
  auto q = [&](double t) {
    const double u2 = (t / M) * (t / M);
    double acc = 0.0;
    for (std::size_t k = f.coefficients.size(); k-- > 1;) acc = acc * u2 + f.coefficients[k];
    return f.coefficients[0] + acc * u2;
  };
  for (int i = 0; i <= 64; ++i) {
    if (!(q(i / 64.0) > 0.0)) throw DomainError("tail model is not positive beyond the direct sum");
  }
  const auto integral = integrate_1d(
      [&](double t) { return std::pow(q(t), -p) * std::pow(t, 2 * p - 2) * std::pow(M, 1 - 2 * p); }, 0.0, 1.0,
      QuadratureOptions{1e-300, 1e-14, 2000});

  // Euler-Maclaurin: sum_{n>=M} f(n) = int_M^inf f + f(M)/2 - sum_k B_2k/(2k)! f^(2k-1)(M).
  constexpr std::array<double, 5> kBernoulli{1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0};
  const auto jet = series_pow_neg(model_jet(f, M, 9), p);  // f^(j)(M) = j! jet[j]
  double corr = 0.0;
  for (int k = 1; k <= 4; ++k) corr += kBernoulli[static_cast<std::size_t>(k - 1)] / (2.0 * k) * jet[static_cast<std::size_t>(2 * k - 1)];
  const double remainder = std::abs(kBernoulli[4] / 10.0 * jet[9]);

  double sum = integral.value + 0.5 * jet[0] - corr;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) sum += *it;
  return {sum, remainder + integral.error_estimate};
}

WeylFit fit_weyl(const Spectrum& s, const WeylOptions& opts) {
  if (s.entries.empty()) throw ParameterError("Weyl fit needs a non-empty spectrum");
  if (!(opts.fit_from_fraction >= 0.0 && opts.fit_from_fraction < 1.0))
    throw ParameterError("Weyl fit fraction must lie in [0, 1)");
  WeylFit w;
  w.cutoff = s.entries.back().value;
  w.included = s.count();
  // Mean staircase: halfway up each jump of the counting function.
  std::vector<std::pair<double, double>> pts;
  double before = 0.0;
  for (const auto& e : s.entries) {
    const double after = before + e.multiplicity;
    if (e.value >= opts.fit_from_fraction * w.cutoff) pts.emplace_back(e.value, 0.5 * (before + after));
    before = after;
  }
  std::vector<int> free_cols;
  if (!opts.w1) free_cols.push_back(0);
  if (!opts.w2) free_cols.push_back(1);
  free_cols.push_back(2);
  if (pts.size() < free_cols.size() + 2) throw FitError("too few eigenvalues in the Weyl fit range");
  Eigen::MatrixXd A(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(free_cols.size()));
  Eigen::VectorXd b(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto [E, N] = pts[i];
    const std::array<double, 3> basis{E / w.cutoff, std::sqrt(E / w.cutoff), 1.0};
    for (std::size_t c = 0; c < free_cols.size(); ++c)
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = basis[static_cast<std::size_t>(free_cols[c])];
    b(static_cast<Eigen::Index>(i)) = N - opts.w1.value_or(0.0) * E - opts.w2.value_or(0.0) * std::sqrt(E);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < A.cols()) throw FitError("Weyl fit design matrix is rank deficient");
  const Eigen::VectorXd beta = qr.solve(b);
  std::array<double, 3> coef{opts.w1.value_or(0.0), opts.w2.value_or(0.0), 0.0};
  const std::array<double, 3> scale{1.0 / w.cutoff, 1.0 / std::sqrt(w.cutoff), 1.0};
  for (std::size_t c = 0; c < free_cols.size(); ++c) {
    const auto k = static_cast<std::size_t>(free_cols[c]);
    coef[k] = beta(static_cast<Eigen::Index>(c)) * scale[k];
  }
  w.w1 = coef[0];
  w.w2 = coef[1];
  w.w3 = coef[2];
  w.rms = std::sqrt((A * beta - b).squaredNorm() / static_cast<double>(pts.size()));
  w.fixed_leading = opts.w1.has_value() || opts.w2.has_value();
  return w;
}

double weyl_tail_2d(const WeylFit& w, int p) {
  if (p < 2) throw ParameterError("the 2D tail converges only for p >= 2");
  const double L = w.cutoff;
  // -N(L)/L^p + p int_L^inf N_model(E) E^(-p-1) dE, term by term.
  auto piece = [&](double a) { return std::pow(L, a - p) / (p - a); };
  return -static_cast<double>(w.included) * std::pow(L, -p) + p * (w.w1 * piece(1.0) + w.w2 * piece(0.5) + w.w3 * piece(0.0));
}

double weyl_tail_2d(const Spectrum& s, int p, const WeylOptions& opts) { return weyl_tail_2d(fit_weyl(s, opts), p); }

NumericSumRule numeric_sum_rule(const Spectrum& s, int p, const std::vector<TailFit>& fits) {
  if (p < 1) throw ParameterError("sum-rule order must be >= 1");
  NumericSumRule r;
  r.p = p;
  r.count = s.count();
  r.partial = s.partial_sum(p);
  r.tail_model = "fit-1d";
  double err = accuracy_spread(s, p);
  for (const auto& f : fits) {
    const auto t = tail_sum(f, p, f.last_index);
    r.tail += f.multiplicity * t.value;
    err += f.multiplicity * t.remainder_bound;
  }
  r.value = r.partial + r.tail;
  r.error_estimate = err;
  return r;
}

NumericSumRule numeric_sum_rule(const Spectrum& s, int p, int P, FitWindow window) {
  auto fits_for = [&](int terms) {
    std::vector<TailFit> fits;
    if (s.bc == BoundaryCondition::periodic) {
      fits.push_back(fit_tail_1d(s, terms, window, 0));
      fits.push_back(fit_tail_1d(s, terms, window, 1));
    } else {
      fits.push_back(fit_tail_1d(s, terms, window, -1));
    }
    return fits;
  };
  auto r = numeric_sum_rule(s, p, fits_for(P));
  if (P >= 1) {
    // Model error: compare against the fit with one inverse power fewer.
    const auto coarse = numeric_sum_rule(s, p, fits_for(P - 1));
    r.error_estimate += std::abs(coarse.tail - r.tail);
  }
  return r;
}

NumericSumRule numeric_sum_rule(const Spectrum& s, int p, const WeylFit& w) {
  NumericSumRule r;
  r.p = p;
  r.count = s.count();
  r.partial = s.partial_sum(p);
  r.tail = weyl_tail_2d(w, p);
  r.tail_model = "weyl";
  r.value = r.partial + r.tail;
  // The staircase fluctuation at the cutoff sets the scale of the tail error.
  const double model_at_cut = w.w1 * w.cutoff + w.w2 * std::sqrt(w.cutoff) + w.w3;
  r.error_estimate = accuracy_spread(s, p) + std::abs(model_at_cut - static_cast<double>(w.included)) * std::pow(w.cutoff, -p);
  return r;
}

} // namespace sumrules
