#include <sumrules/errors.hpp>
#include <sumrules/sum_rules.hpp>

#include <doctest.h>

#include "oracles.hpp"

#include <cmath>

using namespace sumrules;

namespace {

constexpr auto NN = BoundaryCondition::neumann;
constexpr auto PP = BoundaryCondition::periodic;
constexpr auto DD = BoundaryCondition::dirichlet;

double q(double a) { return a * a + 3 * a + 3; }

double borg_z1_nn(double a) { return (a * a + 5 * a + 5) / (10 * q(a)); }
double borg_z1_pp(double a) {
  const double t = a * (a + 3) + 3;
  return (5 * t * t - a * a * (a * (5 * a + 12) + 12)) / (180 * (a + 1) * q(a));
}
double borg_z2_nn(double a) {
  return (std::pow(a, 4) + 10 * std::pow(a, 3) + 45 * a * a + 70 * a + 35) / (350 * q(a) * q(a));
}
double borg_z2_pp(double a) {
  return (24 * std::pow(a, 4) + 100 * std::pow(a, 3) + 205 * a * a + 210 * a + 105) / (8400 * q(a) * q(a));
}

} // namespace

TEST_CASE("uniform string and length scaling") {
  for (double a : {1.0, 2.0}) {
    const auto d = Density::uniform(a);
    CHECK(z1(d, NN).value == doctest::Approx(a * a / 6).epsilon(1e-12));
    CHECK(z1(d, PP).value == doctest::Approx(a * a / 12).epsilon(1e-12));
    CHECK(z1(d, DD).value == doctest::Approx(a * a / 6).epsilon(1e-12));
    CHECK(z2(d, NN).value == doctest::Approx(std::pow(a, 4) / 90).epsilon(1e-12));
    CHECK(z2(d, PP).value == doctest::Approx(std::pow(a, 4) / 720).epsilon(1e-12));
    CHECK(z2(d, DD).value == doctest::Approx(std::pow(a, 4) / 90).epsilon(1e-12));
  }
}

TEST_CASE("borg string under Dirichlet is isospectral to the uniform one") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    const auto d = Density::borg(alpha);
    CHECK(z1(d, DD).value == doctest::Approx(1.0 / 6).epsilon(1e-12));
    CHECK(z2(d, DD).value == doctest::Approx(1.0 / 90).epsilon(1e-12));
  }
}

TEST_CASE("borg string: closed forms") {
  for (double alpha : {0.5, 1.0, 2.0, -0.5}) {
    const auto d = Density::borg(alpha);
    CHECK(z1(d, NN).value == doctest::Approx(borg_z1_nn(alpha)).epsilon(1e-11));
    CHECK(z1(d, PP).value == doctest::Approx(borg_z1_pp(alpha)).epsilon(1e-11));
    CHECK(z2(d, NN).value == doctest::Approx(borg_z2_nn(alpha)).epsilon(1e-10));
    CHECK(z2(d, PP).value == doctest::Approx(borg_z2_pp(alpha)).epsilon(1e-10));
  }
  CHECK(borg_z1_nn(1.0) == doctest::Approx(11.0 / 70));
}

TEST_CASE("result parts add up") {
  for (const auto& d : {Density::borg(1.0), Density::oscillating(1.0)}) {
    for (auto bc : {NN, PP}) {
      const auto r1 = z1(d, bc);
      CHECK(r1.value == doctest::Approx(r1.trace_term + r1.zero_mode_subtraction).epsilon(1e-15));
      CHECK(r1.value <= r1.trace_term);
      const auto r2 = z2(d, bc);
      CHECK(r2.value == doctest::Approx(r2.trace_term + r2.g1_term + r2.zero_mode_subtraction).epsilon(1e-15));
      REQUIRE(r2.e0.has_value());
      const auto& e = *r2.e0;
      const double zm = (3 * e.e2 * e.e2 - 2 * e.e1 * e.e3) / std::pow(e.e1, 4);
      CHECK(r2.zero_mode_subtraction == doctest::Approx(-zm).epsilon(1e-13));
      CHECK(r2.error_estimate < 1e-8);
    }
  }
}

TEST_CASE("trace term against a direct double integral") {
  const auto d = Density::borg(1.0);
  const double t1 = oracle::integrate([&](double x) { return eval_g0(NN, 1.0, x, x) * d(x); }, -0.5, 0.5);
  CHECK(trace_t1(d, NN).value == doctest::Approx(t1).epsilon(1e-12));
  const double b0 = oracle::integrate(
      [&](double x) {
        return d(x) * oracle::integrate([&](double y) { return eval_g0(NN, 1.0, x, y) * d(y); }, -0.5, 0.5, {x});
      },
      -0.5, 0.5);
  CHECK(bilinear_b(d, NN, 0).value == doctest::Approx(b0).epsilon(1e-10));
  CHECK_THROWS_AS((void)bilinear_b(d, DD, 0), NoZeroModeError);
}

TEST_CASE("oscillating string against its catalogued closed forms") {
  CHECK(z1(Density::oscillating(1.0), NN).value ==
        doctest::Approx(reference_value("oscillating", {{"epsilon", 1.0}}, NN, 1).value).epsilon(1e-11));
  // 1/eps not an integer, where the trace part depends on the phase at the ends.
  CHECK(z1(Density::oscillating(0.3), NN).value ==
        doctest::Approx(reference_value("oscillating", {{"epsilon", 0.3}}, NN, 1).value).epsilon(1e-11));
  const auto ref = reference_value("oscillating", {{"epsilon", 1.0}}, NN, 2);
  const auto r = z2(Density::oscillating(1.0), NN);
  CHECK(r.value == doctest::Approx(ref.value).epsilon(1e-9));
}

TEST_CASE("oscillating string: small-eps expansion of Z2 holds to O(eps^3)") {
  for (double eps : {0.0713, 0.04, 0.0357}) {
    const auto ref = reference_value("oscillating", {{"epsilon", eps}}, NN, 2);
    CHECK_FALSE(ref.exact);
    CHECK(std::abs(z2(Density::oscillating(eps), NN).value - ref.value) < 0.05 * eps * eps * eps);
  }
}

TEST_CASE("annulus: order 2 pieces and small-radius behaviour") {
  for (double r : {0.5, 0.1}) {
    const auto z = annulus_z2(r);
    CHECK(z.result.value > 0.0);
    CHECK(z.result.value < z.without_zero_mode);
    CHECK(z.result.value == doctest::Approx(z.without_zero_mode + z.result.g1_term + z.result.zero_mode_subtraction)
                                .epsilon(1e-13));
    CHECK(z.without_zero_mode ==
          doctest::Approx(z.radial_trace + z.angular_sum + z.angular_tail).epsilon(1e-13));
  }
  const auto z = annulus_z2(0.01);
  CHECK(std::abs(z.result.value - annulus_asymptotic(0.01)) < 1e-3);
  CHECK(annulus_asymptotic(0.0) == doctest::Approx(annulus_limit()));
}

TEST_CASE("annulus: zero-mode terms vanish for a thin ring and dominate for a small hole") {
  const auto thin = annulus_z2(0.9);
  CHECK(std::abs(thin.result.value - thin.without_zero_mode) < 1e-3 * thin.result.value);
  // The trace alone grows like log(1/r)^2 while the full value stays bounded.
  const auto a = annulus_z2(1e-2);
  const auto b = annulus_z2(1e-3);
  CHECK(b.without_zero_mode > 1.8 * a.without_zero_mode);
  CHECK(std::abs(b.result.value - a.result.value) < 2e-4);
}

TEST_CASE("reference catalogue rejects unknown problems") {
  CHECK_THROWS_AS((void)reference_value("membrane", {}, NN, 1), UnsupportedError);
}
