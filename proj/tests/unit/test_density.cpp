#include <sumrules/density.hpp>
#include <sumrules/errors.hpp>

#include <doctest.h>

#include "oracles.hpp"

#include <cmath>

using namespace sumrules;

TEST_CASE("builtin densities at the interval ends") {
  const auto b = Density::borg(1.0);
  CHECK(b(-0.5) == doctest::Approx(4.0));
  CHECK(b(0.5) == doctest::Approx(0.25));
  const auto o = Density::oscillating(1.0);
  CHECK(o(-0.5) == doctest::Approx(2.0));
  CHECK(o(-0.25) == doctest::Approx(3.0));
  const auto u = Density::uniform(2.0);
  CHECK(u.interval().lo() == -1.0);
  CHECK(u(0.9) == 1.0);
}

TEST_CASE("coordinates outside the interval are rejected") {
  const auto b = Density::borg(1.0);
  CHECK_THROWS_AS((void)b(0.6), DomainError);
  CHECK_NOTHROW((void)b(0.5 + 1e-17));
}

TEST_CASE("parameter ranges") {
  CHECK_THROWS_AS((void)Density::borg(-1.0), ParameterError);
  CHECK_THROWS_AS((void)Density::oscillating(0.0), ParameterError);
  CHECK_THROWS_AS((void)Density::annulus(1.0), ParameterError);
  CHECK_THROWS_AS((void)Density::annulus(0.0), ParameterError);
  CHECK_THROWS_AS((void)Density::uniform(-1.0), ParameterError);
  CHECK_THROWS_AS((void)make_builtin("nope", {}), ParameterError);
}

TEST_CASE("integral of Sigma against an independent rule") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    const auto d = Density::borg(alpha);
    const double ref = oracle::integrate([&](double x) { return d(x); }, -0.5, 0.5);
    const double closed = (1 + alpha) * (1 + alpha) * (1 - std::pow(1 + alpha, -3)) / (3 * alpha);
    CHECK(ref == doctest::Approx(closed).epsilon(1e-13));
    CHECK(density_integral(d).value == doctest::Approx(closed).epsilon(1e-13));
  }
  const auto o = Density::oscillating(0.1);
  CHECK(density_integral(o).value == doctest::Approx(2.0).epsilon(1e-13));
  const auto a = Density::annulus(0.5);
  // r e^{2x} over log(1/r) x 2 pi equals the annulus area pi (1 - r^2).
  CHECK(density_integral(a).value == doctest::Approx(oracle::pi * 0.75).epsilon(1e-13));
}

TEST_CASE("derivative agrees with a central difference") {
  for (const auto& d : {Density::borg(2.0), Density::oscillating(0.3, 0.4), Density::annulus(0.2)}) {
    const auto& dom = d.interval();
    for (double t : {0.2, 0.5, 0.8}) {
      const double x = dom.lo() + t * dom.a;
      const double h = 1e-6;
      CHECK(d.value_and_derivative(x).d == doctest::Approx((d(x + h) - d(x - h)) / (2 * h)).epsilon(1e-7));
    }
  }
}

TEST_CASE("positivity scan") {
  for (double alpha : {-0.9, 0.5, 1.0, 10.0}) CHECK(validate_positivity(Density::borg(alpha)).ok);
  for (double eps : {1.0, 0.1, 0.05}) CHECK(validate_positivity(Density::oscillating(eps)).ok);
  CHECK(validate_positivity(Density::annulus(0.001)).ok);
  const auto bad = Density::expression(expr::BoundExpression(expr::Expression::parse("x^2 - 0.01"), {}));
  const auto r = validate_positivity(bad);
  CHECK_FALSE(r.ok);
  CHECK(std::abs(r.x) < 1e-6);
  CHECK(r.value == doctest::Approx(-0.01).epsilon(1e-9));
  // A narrow dip between grid points is still found by the local refinement.
  const auto dip = Density::expression(expr::BoundExpression(expr::Expression::parse("1 - 1.001*exp(-(x-0.1)^2/1e-9)"), {}));
  CHECK_FALSE(validate_positivity(dip).ok);
}

TEST_CASE("expression densities and their description") {
  const auto d = make_builtin("borg", {{"alpha", 1.0}});
  CHECK(d.describe().find("borg") != std::string::npos);
  const auto e = Density::expression(expr::BoundExpression(expr::Expression::parse("2 - sin(2*pi*x)"), {}));
  const auto o = Density::oscillating(1.0);
  for (double x : {-0.4, -0.1, 0.2, 0.45}) CHECK(e(x) == doctest::Approx(o(x)).epsilon(1e-14));
}
