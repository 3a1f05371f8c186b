#pragma once

// Turns a finite spectrum into a sum-rule estimate: an asymptotic model for
// the uncomputed eigenvalues is fitted and its tail summed.

#include <sumrules/spectra.hpp>

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace sumrules {

/// How eigenvalues are numbered for the fit. Periodic spectra are fitted per
/// level on each member of the pair separately.
enum class IndexConvention { sorted, per_level };

[[nodiscard]] std::string_view to_string(IndexConvention c) noexcept;

/// Inclusive 1-based index range; lo = hi = 0 selects the last 5% of the data.
struct FitWindow {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

/// E_n ~ c1 n^2 + c2 + sum_{k=1..P} c_{k+2} n^{-2k}
struct TailFit {
  std::vector<double> coefficients;
  std::size_t window_lo = 0;
  std::size_t window_hi = 0;
  std::size_t last_index = 0;  // largest index present in the data
  double rms = 0.0;
  IndexConvention convention = IndexConvention::sorted;
  int branch = -1;  // periodic pair member, -1 when unused
  int multiplicity = 1;

  [[nodiscard]] double model(double n) const;
  [[nodiscard]] int inverse_powers() const noexcept { return static_cast<int>(coefficients.size()) - 2; }
};

TailFit fit_tail_1d(const Spectrum& s, int P, FitWindow window = {}, int branch = -1);

struct TailSum {
  double value = 0.0;
  double remainder_bound = 0.0;
};

/// sum_{n > from_n} model(n)^-p by direct summation followed by Euler-Maclaurin.
TailSum tail_sum(const TailFit& f, int p, std::size_t from_n);

/// Counting-function model N(E) ~ w1 E + w2 sqrt(E) + w3.
struct WeylFit {
  double w1 = 0.0;
  double w2 = 0.0;
  double w3 = 0.0;
  double cutoff = 0.0;        // last included eigenvalue
  std::size_t included = 0;   // eigenvalues up to the cutoff, with multiplicity
  double rms = 0.0;
  bool fixed_leading = false; // w1, w2 supplied rather than fitted
};

struct WeylOptions {
  double fit_from_fraction = 0.25;  // fit on E in [fraction * cutoff, cutoff]
  std::optional<double> w1;         // fix the area term
  std::optional<double> w2;         // fix the perimeter term
};

WeylFit fit_weyl(const Spectrum& s, const WeylOptions& opts = {});

/// integral_{cutoff}^inf E^-p dN with N the fitted model and N(cutoff) = included.
double weyl_tail_2d(const WeylFit& w, int p);
double weyl_tail_2d(const Spectrum& s, int p, const WeylOptions& opts = {});

struct NumericSumRule {
  int p = 1;
  double partial = 0.0;
  double tail = 0.0;
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t count = 0;
  std::string_view tail_model;  // "fit-1d" or "weyl"
};

/// Partial sum plus fitted 1D tail; periodic spectra use one fit per pair member.
NumericSumRule numeric_sum_rule(const Spectrum& s, int p, int P = 2, FitWindow window = {});
NumericSumRule numeric_sum_rule(const Spectrum& s, int p, const std::vector<TailFit>& fits);
NumericSumRule numeric_sum_rule(const Spectrum& s, int p, const WeylFit& w);

} // namespace sumrules
