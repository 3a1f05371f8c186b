#include <sumrules/quadrature.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace sumrules;
using std::numbers::pi;

TEST_CASE("smooth integrands reach the absolute tolerance") {
  const auto r = integrate_1d([](double x) { return std::sin(x); }, 0.0, pi);
  CHECK(std::abs(r.value - 2.0) < 1e-12);
  CHECK(r.error_estimate <= 1e-12);
  const auto g = integrate_1d([](double x) { return std::exp(-x * x); }, -6.0, 6.0);
  CHECK(std::abs(g.value - std::sqrt(pi) * std::erf(6.0)) < 1e-12);
}

TEST_CASE("endpoint singularities are handled by refinement") {
  const auto r = integrate_1d([](double x) { return std::sqrt(x); }, 0.0, 1.0);
  CHECK(std::abs(r.value - 2.0 / 3.0) < 1e-12);
  const auto l = integrate_1d([](double x) { return std::log(x); }, 0.0, 1.0, QuadratureOptions{1e-10, 0.0, 50000});
  CHECK(std::abs(l.value + 1.0) < 1e-10);
}

TEST_CASE("split points tame a kink") {
  auto kink = [](double x) { return std::abs(x - 0.3); };
  const double exact = 0.5 * (0.3 * 0.3 + 0.7 * 0.7);
  const std::vector<double> split{0.3};
  const auto r = integrate_1d(kink, 0.0, 1.0, kDefault1d, split);
  CHECK(std::abs(r.value - exact) < 1e-14);
  CHECK(r.panels_used == 2);
}

TEST_CASE("reversed limits flip the sign") {
  const auto r = integrate_1d([](double x) { return x * x; }, 1.0, 0.0);
  CHECK(std::abs(r.value + 1.0 / 3.0) < 1e-14);
}

TEST_CASE("exhausted budget raises AccuracyError with the best estimate") {
  auto wild = [](double x) { return std::sin(1.0 / x) / x; };
  try {
    (void)integrate_1d(wild, 1e-4, 1.0, QuadratureOptions{1e-14, 0.0, 20});
    FAIL("expected AccuracyError");
  } catch (const AccuracyError& e) {
    CHECK(std::isfinite(e.best_estimate()));
    CHECK(e.error_estimate() > 1e-14);
  }
  CHECK_THROWS_AS((void)integrate_1d([](double x) { return x; }, 0.0, 1.0, QuadratureOptions{0.0, 0.0, 10}),
                  ParameterError);
}

TEST_CASE("results are bit-identical across runs") {
  auto f = [](double x) { return std::cos(40.0 * x) * std::exp(x); };
  const auto a = integrate_1d(f, 0.0, 2.0);
  const auto b = integrate_1d(f, 0.0, 2.0);
  CHECK(a.value == b.value);
  CHECK(a.panels_used == b.panels_used);
}

TEST_CASE("2D nested rule with a diagonal kink") {
  auto f = [](double x, double y) { return std::abs(x - y); };
  const auto r = integrate_2d(f, 0.0, 1.0, 0.0, 1.0, kDefault2d, true);
  CHECK(std::abs(r.value - 1.0 / 3.0) < 1e-10);
  const auto p = integrate_2d([](double x, double y) { return std::sin(x) * std::cos(y); }, 0.0, pi, 0.0, pi / 2);
  CHECK(std::abs(p.value - 2.0) < 1e-10);
}
