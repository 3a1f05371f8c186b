#pragma once

// Density expressions such as "(1+a)^2/(1+a*(x+1/2))^4".
//
// Grammar (EBNF), see docs/expression-grammar.md:
//   expr    = term { ("+" | "-") term } ;
//   term    = power { ("*" | "/") power } ;
//   power   = unary [ "^" power ] ;           (right-associative)
//   unary   = ("-" | "+") unary | primary ;   (so -x^2 == (-x)^2)
//   primary = number | ident | ident "(" expr ")" | "(" expr ")" ;

#include <sumrules/dual.hpp>

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sumrules::expr {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

enum class BinaryOp { add, sub, mul, div, pow };
enum class Function { sin, cos, tan, exp, log, sqrt, abs };

struct Number {
  double value;
  bool integer_literal;
};
struct Variable {};
struct Constant {
  std::string name;
  double value;
};
struct ParamRef {
  std::string name;
  std::size_t slot;
};
struct Negate {
  NodePtr operand;
};
struct Binary {
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;
};
struct Call {
  Function fn;
  NodePtr arg;
};

struct Node {
  std::variant<Number, Variable, Constant, ParamRef, Negate, Binary, Call> data;
};

using ParamMap = std::map<std::string, double, std::less<>>;

/// Immutable parsed expression. Cheap to copy; shares its tree.
class Expression {
public:
  /// Parses text. Identifiers other than x, pi, e and the function names must
  /// appear in param_names, otherwise SyntaxError("unknown identifier").
  static Expression parse(std::string_view text, std::span<const std::string> param_names = {});

  [[nodiscard]] const NodePtr& root() const noexcept { return root_; }
  [[nodiscard]] const std::vector<std::string>& parameters() const noexcept { return params_; }
  [[nodiscard]] const std::string& source() const noexcept { return source_; }

  /// Fully parenthesised text that reparses to an equivalent tree.
  [[nodiscard]] std::string to_string() const;

  /// Evaluates with parameters given in parameters() order. No finiteness check.
  [[nodiscard]] double evaluate(double x, std::span<const double> param_values) const;
  [[nodiscard]] Dual evaluate(Dual x, std::span<const double> param_values) const;

private:
  NodePtr root_;
  std::vector<std::string> params_;
  std::string source_;
};

/// Expression with every parameter bound. Throws DomainError on non-finite results.
class BoundExpression {
public:
  BoundExpression(Expression e, const ParamMap& params);

  double operator()(double x) const;
  [[nodiscard]] Dual with_derivative(double x) const;

  [[nodiscard]] const Expression& expression() const noexcept { return expr_; }
  [[nodiscard]] ParamMap bindings() const;

private:
  Expression expr_;
  std::vector<double> values_;
};

/// Convenience: bind and evaluate once.
double eval_ast(const Expression& e, double x, const ParamMap& params);

} // namespace sumrules::expr
