#include <sumrules/errors.hpp>
#include <sumrules/expr.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace sumrules;
using namespace sumrules::expr;

namespace {
double eval(const std::string& text, double x = 0.0, const ParamMap& params = {}) {
  std::vector<std::string> names;
  for (const auto& [k, v] : params) names.push_back(k);
  return eval_ast(Expression::parse(text, names), x, params);
}
} // namespace

TEST_CASE("precedence and associativity") {
  CHECK(eval("2 + 3 * 4") == 14.0);
  CHECK(eval("(2 + 3) * 4") == 20.0);
  CHECK(eval("2 ^ 3 ^ 2") == 512.0);
  CHECK(eval("-2 ^ 2") == 4.0);
  CHECK(eval("-(2 ^ 2)") == -4.0);
  CHECK(eval("8 / 4 / 2") == 1.0);
  CHECK(eval("1 - 2 - 3") == -4.0);
  CHECK(eval("2 * -3") == -6.0);
}

TEST_CASE("constants, functions and the variable") {
  CHECK(eval("pi") == doctest::Approx(std::numbers::pi).epsilon(1e-15));
  CHECK(eval("e") == doctest::Approx(std::numbers::e).epsilon(1e-15));
  CHECK(eval("2 + sin(2*pi*x)", 0.25) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(eval("sqrt(abs(x)) + exp(0) + log(e) + cos(0) + tan(0)", -4.0) == doctest::Approx(5.0));
  CHECK(eval("1.5e2 + .5") == 150.5);
}

TEST_CASE("integer powers are exact") {
  CHECK(eval("x^4", 1.1) == (1.1 * 1.1) * (1.1 * 1.1));
  CHECK(eval("x^3", -2.0) == -8.0);
  CHECK(eval("x^-2", 4.0) == 1.0 / 16.0);
}

TEST_CASE("parameters bind by name") {
  CHECK(eval("(1 + alpha)^2 / (1 + alpha*(x + 1/2))^4", -0.5, {{"alpha", 1.0}}) == doctest::Approx(4.0));
  CHECK_THROWS_AS((void)Expression::parse("k * x"), SyntaxError);
  const std::vector<std::string> reserved{"pi"};
  CHECK_THROWS_AS((void)Expression::parse("x", reserved), ParameterError);
}

TEST_CASE("syntax errors carry the byte offset and expectations") {
  try {
    (void)Expression::parse("2 +");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 3);
    CHECK(!e.expected().empty());
  }
  CHECK_THROWS_AS((void)Expression::parse("2 * (x + 1"), SyntaxError);
  CHECK_THROWS_AS((void)Expression::parse("foo(x)"), SyntaxError);
  CHECK_THROWS_AS((void)Expression::parse("1 2"), SyntaxError);
  CHECK_THROWS_AS((void)Expression::parse(""), SyntaxError);
}

TEST_CASE("non-finite evaluation is a DomainError") {
  const BoundExpression b(Expression::parse("log(x)"), {});
  CHECK_THROWS_AS((void)b(-1.0), DomainError);
  CHECK(b(1.0) == 0.0);
}

TEST_CASE("printing round-trips to an equivalent tree") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (const char* text : {"2 - sin(2*pi*x + 2)", "-(x^2^-1) + 3/(1+x^2)", "exp(-x)*cos(3*x) - 0.1", "((x))"}) {
    const auto e = Expression::parse(text);
    const auto again = Expression::parse(e.to_string());
    CHECK(again.to_string() == e.to_string());
    for (int i = 0; i < 20; ++i) {
      const double x = u(rng) + 1.7;
      CHECK(eval_ast(again, x, {}) == eval_ast(e, x, {}));
    }
  }
}

TEST_CASE("forward derivative matches a central difference") {
  const BoundExpression b(Expression::parse("(1 + a)^2 / (1 + a*(x + 1/2))^4 + sin(3*x)", std::vector<std::string>{"a"}),
                          {{"a", 0.7}});
  for (double x : {-0.4, 0.0, 0.3}) {
    const double h = 1e-6;
    const double fd = (b(x + h) - b(x - h)) / (2 * h);
    CHECK(b.with_derivative(x).d == doctest::Approx(fd).epsilon(1e-8));
    CHECK(b.with_derivative(x).v == b(x));
  }
}
