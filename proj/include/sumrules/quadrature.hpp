#pragma once

// Globally adaptive Gauss-Kronrod (10/21) integration in one and two
// dimensions. Panels are refined worst-first; the final sum is taken in
// left-to-right panel order so identical inputs give bit-identical output.

#include <sumrules/errors.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <vector>

namespace sumrules {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t panels_used = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  std::size_t max_panels = 50000;
};

inline constexpr QuadratureOptions kDefault1d{1e-12, 0.0, 50000};
inline constexpr QuadratureOptions kDefault2d{1e-10, 0.0, 50000};

namespace detail {

inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208767098523, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights for the odd-indexed Kronrod nodes.
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  double abs_value;
};

// QUADPACK qk21 with its error heuristic.
template <class F>
Panel gk21(F& f, double a, double b) {
  constexpr double epmach = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = 0.0;
  double resk = kWgk[10] * fc;
  double resabs = std::abs(resk);
  std::array<double, 10> fv1{};
  std::array<double, 10> fv2{};
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (std::size_t j = 0; j < 10; ++j)
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  const double ahalf = std::abs(half);
  resabs *= ahalf;
  resasc *= ahalf;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > uflow / (50.0 * epmach)) err = std::max(epmach * 50.0 * resabs, err);
  return Panel{a, b, resk * half, err, resabs};
}

struct ByError {
  bool operator()(const Panel& l, const Panel& r) const { return l.error < r.error; }
};

inline double ordered_sum(std::vector<Panel>& panels, double Panel::*member) {
  std::sort(panels.begin(), panels.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
  double s = 0.0;
  double c = 0.0;
  for (const auto& p : panels) {
    const double y = p.*member - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

} // namespace detail

/// Integrates f over [a, b]. Panels never straddle the given split points.
/// Throws AccuracyError (carrying the best estimate) when the panel budget is
/// exhausted before the tolerance max(abs_tol, rel_tol*|I|) is met.
template <class F>
QuadratureResult integrate_1d(F&& f, double a, double b, const QuadratureOptions& opts = kDefault1d,
                              std::span<const double> split_points = {}) {
  if (!(opts.abs_tol > 0.0 || opts.rel_tol > 0.0))
    throw ParameterError("integrate_1d: tolerance must be positive");
  if (a == b) return {};
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::vector<double> edges{a};
  for (double s : split_points) {
    if (s > a && s < b) edges.push_back(s);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::priority_queue<detail::Panel, std::vector<detail::Panel>, detail::ByError> heap;
  std::vector<detail::Panel> frozen;  // too narrow to split further
  double total = 0.0;
  double total_err = 0.0;
  double total_abs = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    auto p = detail::gk21(f, edges[i], edges[i + 1]);
    total += p.value;
    total_err += p.error;
    total_abs += p.abs_value;
    heap.push(p);
  }
  std::size_t panels = heap.size();
  constexpr double eps = std::numeric_limits<double>::epsilon();
  auto target = [&] {
    return std::max({opts.abs_tol, opts.rel_tol * std::abs(total), 50.0 * eps * total_abs}) * (1.0 + 1e-9);
  };
  std::size_t since_resum = 0;
  while (total_err > target() && !heap.empty()) {
    if (panels >= opts.max_panels) break;
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 64.0 * eps * std::max(std::abs(worst.a), std::abs(worst.b))) {
      frozen.push_back(worst);
      continue;
    }
    auto l = detail::gk21(f, worst.a, mid);
    auto r = detail::gk21(f, mid, worst.b);
    total += l.value + r.value - worst.value;
    total_err += l.error + r.error - worst.error;
    total_abs += l.abs_value + r.abs_value - worst.abs_value;
    heap.push(l);
    heap.push(r);
    ++panels;
    if (++since_resum == 256) {
      // Incremental sums drift; recompute from scratch now and then.
      since_resum = 0;
      auto copy = heap;
      total = total_err = total_abs = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_err += copy.top().error;
        total_abs += copy.top().abs_value;
        copy.pop();
      }
      for (const auto& p : frozen) {
        total += p.value;
        total_err += p.error;
        total_abs += p.abs_value;
      }
    }
  }
  std::vector<detail::Panel> all = std::move(frozen);
  all.reserve(all.size() + heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  const std::size_t n_panels = all.size();
  const double value = detail::ordered_sum(all, &detail::Panel::value);
  double err = 0.0;
  double abs_sum = 0.0;
  for (const auto& p : all) {
    err += p.error;
    abs_sum += p.abs_value;
  }
  if (!std::isfinite(value)) throw DomainError("integrate_1d: integrand produced a non-finite value");
  const double tol = std::max({opts.abs_tol, opts.rel_tol * std::abs(value), 50.0 * eps * abs_sum}) * (1.0 + 1e-9);
  if (err > tol) {
    throw AccuracyError("integrate_1d: tolerance not reached within the panel budget", sign * value, err);
  }
  return {sign * value, err, n_panels};
}

/// Integrates f(x, y) over [x0, x1] x [y0, y1] as nested adaptive 1D rules.
/// With split_diagonal the inner panels are split at y = x. Extra split points
/// apply to both directions.
template <class F>
QuadratureResult integrate_2d(F&& f, double x0, double x1, double y0, double y1,
                              const QuadratureOptions& opts = kDefault2d, bool split_diagonal = false,
                              std::span<const double> split_points = {}) {
  const double width = std::abs(x1 - x0);
  QuadratureOptions inner = opts;
  inner.abs_tol = opts.abs_tol / (4.0 * std::max(width, 1e-300));
  double worst_inner = 0.0;
  std::size_t inner_panels = 0;
  std::vector<double> splits(split_points.begin(), split_points.end());
  splits.push_back(0.0);
  auto outer = [&](double x) {
    splits.back() = x;
    auto inner_splits = split_diagonal ? std::span<const double>(splits)
                                       : std::span<const double>(splits.data(), splits.size() - 1);
    auto r = integrate_1d([&](double y) { return f(x, y); }, y0, y1, inner, inner_splits);
    worst_inner = std::max(worst_inner, r.error_estimate);
    inner_panels += r.panels_used;
    return r.value;
  };
  QuadratureOptions outer_opts = opts;
  outer_opts.abs_tol = 0.5 * opts.abs_tol;
  auto r = integrate_1d(outer, x0, x1, outer_opts, split_points);
  return {r.value, r.error_estimate + width * worst_inner, r.panels_used + inner_panels};
}

} // namespace sumrules
