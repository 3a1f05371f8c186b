#include <sumrules/basis.hpp>
#include <sumrules/errors.hpp>
#include <sumrules/greens.hpp>

#include <doctest.h>

#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace sumrules;

namespace {
constexpr BoundaryCondition NN = BoundaryCondition::neumann;
constexpr BoundaryCondition PP = BoundaryCondition::periodic;
constexpr BoundaryCondition DD = BoundaryCondition::dirichlet;
} // namespace

TEST_CASE("boundary condition names") {
  CHECK(parse_bc("NN") == NN);
  CHECK(parse_bc("periodic") == PP);
  CHECK(parse_bc("DD") == DD);
  CHECK_THROWS_AS((void)parse_bc("robin"), ParameterError);
  CHECK_THROWS_AS((void)eval_g1(DD, 1.0, 0.0, 0.0), UnsupportedError);
}

TEST_CASE("closed forms are exactly symmetric") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-0.75, 0.75);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng), y = u(rng);
    for (auto bc : {NN, PP, DD}) CHECK(eval_g0(bc, 1.5, x, y) == eval_g0(bc, 1.5, y, x));
    for (auto bc : {NN, PP}) CHECK(eval_g1(bc, 1.5, x, y) == eval_g1(bc, 1.5, y, x));
  }
}

TEST_CASE("kernels annihilate the zero mode") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng);
    for (auto bc : {NN, PP})
      for (int q : {0, 1}) {
        auto g = [&](double y) { return q == 0 ? eval_g0(bc, 1.0, x, y) : eval_g1(bc, 1.0, x, y); };
        CHECK(std::abs(oracle::integrate(g, -0.5, 0.5, {x})) < 1e-10);
      }
  }
}

TEST_CASE("closed form against a cosine series written out here") {
  for (double a : {1.0, 2.0}) {
    for (auto [x, y] : {std::pair{0.1 * a, -0.3 * a}, std::pair{0.45 * a, 0.45 * a}, std::pair{-0.2 * a, 0.0}}) {
      const double series0 = oracle::neumann_series(a, 0, x, y, 200000);
      CHECK(eval_g0(NN, a, x, y) == doctest::Approx(series0).epsilon(1e-5));
      const double series1 = oracle::neumann_series(a, 1, x, y, 20000);
      CHECK(std::abs(eval_g1(NN, a, x, y) - series1) < 1e-13 * a * a * a * a);
    }
  }
}

TEST_CASE("spectral partial sums converge at the expected rate") {
  const double x = 0.13, y = -0.31;
  for (auto bc : {NN, PP, DD}) {
    for (int q : {0, 1}) {
      if (bc == DD && q == 1) continue;
      const double exact = q == 0 ? eval_g0(bc, 1.0, x, y) : eval_g1(bc, 1.0, x, y);
      for (std::size_t M : {100u, 1000u, 10000u}) {
        const auto s = spectral_series_oracle(bc, 1.0, q, x, y, M);
        // |closed - series(M)| <= C M^-(2q+1)
        CHECK(std::abs(s.value - exact) <= 1.0 * std::pow(static_cast<double>(M), -(2.0 * q + 1.0)));
      }
    }
  }
}

TEST_CASE("trace identities") {
  auto trace = [](BoundaryCondition bc, double a, int q) {
    return oracle::integrate(
        [&](double x) { return q == 0 ? eval_g0(bc, a, x, x) : eval_g1(bc, a, x, x); }, -a / 2, a / 2);
  };
  for (double a : {1.0, 2.0}) {
    CHECK(trace(NN, a, 0) == doctest::Approx(a * a / 6).epsilon(1e-13));
    CHECK(trace(PP, a, 0) == doctest::Approx(a * a / 12).epsilon(1e-13));
    CHECK(trace(DD, a, 0) == doctest::Approx(a * a / 6).epsilon(1e-13));
    CHECK(trace(NN, a, 1) == doctest::Approx(std::pow(a, 4) / 90).epsilon(1e-12));
    CHECK(trace(PP, a, 1) == doctest::Approx(std::pow(a, 4) / 720).epsilon(1e-12));
  }
}

TEST_CASE("G1 equals the convolution of G0 with itself") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (auto bc : {NN, PP}) {
    const auto g0 = GreensKernel::closed_form(bc, 1.0, 0);
    const auto conv = GreensKernel::convolve(g0, g0);
    for (int i = 0; i < 100; ++i) {
      const double x = u(rng), y = u(rng);
      const double independent = oracle::integrate(
          [&](double z) { return eval_g0(bc, 1.0, x, z) * eval_g0(bc, 1.0, z, y); }, -0.5, 0.5, {std::min(x, y), std::max(x, y)});
      CHECK(std::abs(conv(x, y) - eval_g1(bc, 1.0, x, y)) < 1e-12);
      CHECK(std::abs(independent - eval_g1(bc, 1.0, x, y)) < 1e-12);
      CHECK(conv(x, y) == conv(y, x));
    }
  }
}

TEST_CASE("shifted Neumann kernel solves the shifted problem") {
  const double a = 1.3, eta = 4.0;
  // Integrating -G'' + eta G = delta against 1 gives eta int G = 1.
  const double x = 0.21;
  const double total = oracle::integrate([&](double y) { return shifted_neumann_kernel(a, eta, x, y); }, -a / 2, a / 2, {x});
  CHECK(eta * total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(shifted_neumann_kernel(a, eta, x, -0.4) == shifted_neumann_kernel(a, eta, -0.4, x));
  // Large eta stays finite.
  CHECK(std::isfinite(shifted_neumann_kernel(a, 1e6, 0.1, 0.1)));
}

TEST_CASE("basis is orthonormal") {
  for (auto bc : {NN, PP, DD}) {
    const BasisTable t(bc, 1.4, 9);
    for (std::size_t m = 0; m < t.size(); ++m)
      for (std::size_t n = m; n < t.size(); ++n) {
        const double ip = oracle::integrate([&](double x) { return t.value(m, x) * t.value(n, x); }, -0.7, 0.7);
        CHECK(std::abs(ip - (m == n ? 1.0 : 0.0)) < 1e-13);
      }
  }
  const BasisTable p(PP, 1.0, 5);
  CHECK(p.eigenvalue(1) == p.eigenvalue(2));
  CHECK(p.eigenvalue(1) == doctest::Approx(4 * oracle::pi * oracle::pi));
}
