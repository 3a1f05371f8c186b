#include <sumrules/errors.hpp>
#include <sumrules/expr.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>

namespace sumrules::expr {
namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string text;
  double number = 0.0;
  bool integer = false;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      bool integer = true;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i < s.size() && s[i] == '.') {
        integer = false;
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      }
      // Exponent only when digits follow, so "2e" stays 2 * e is rejected cleanly.
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
          integer = false;
          i = j;
          while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        }
      }
      std::string text(s.substr(start, i - start));
      out.push_back({Tok::number, start, text, std::strtod(text.c_str(), nullptr), integer});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::ident, start, std::string(s.substr(start, i - start))});
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::plus; break;
      case '-': k = Tok::minus; break;
      case '*': k = Tok::star; break;
      case '/': k = Tok::slash; break;
      case '^': k = Tok::caret; break;
      case '(': k = Tok::lparen; break;
      case ')': k = Tok::rparen; break;
      default:
        throw SyntaxError("unexpected character '" + std::string(1, c) + "' at offset " + std::to_string(i), i,
                          {"number", "identifier", "operator"});
    }
    out.push_back({k, start, std::string(1, c)});
    ++i;
  }
  out.push_back({Tok::end, s.size(), ""});
  return out;
}

std::optional<Function> function_named(std::string_view name) {
  if (name == "sin") return Function::sin;
  if (name == "cos") return Function::cos;
  if (name == "tan") return Function::tan;
  if (name == "exp") return Function::exp;
  if (name == "log") return Function::log;
  if (name == "sqrt") return Function::sqrt;
  if (name == "abs") return Function::abs;
  return std::nullopt;
}

const char* function_name(Function f) {
  switch (f) {
    case Function::sin: return "sin";
    case Function::cos: return "cos";
    case Function::tan: return "tan";
    case Function::exp: return "exp";
    case Function::log: return "log";
    case Function::sqrt: return "sqrt";
    case Function::abs: return "abs";
  }
  return "?";
}

NodePtr make(auto&& alt) { return std::make_shared<const Node>(Node{std::forward<decltype(alt)>(alt)}); }

class Parser {
public:
  Parser(std::string_view text, std::span<const std::string> params) : tokens_(lex(text)), params_(params) {}

  NodePtr parse() {
    auto e = expr();
    if (peek().kind != Tok::end) fail({"operator", "end of input"});
    return e;
  }

private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const auto& t = peek();
    std::string what = t.kind == Tok::end ? "unexpected end of input" : "unexpected token '" + t.text + "'";
    what += " at offset " + std::to_string(t.offset) + "; expected one of:";
    for (const auto& e : expected) what += " " + e;
    throw SyntaxError(what, t.offset, std::move(expected));
  }

  NodePtr expr() {
    auto lhs = term();
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      const auto op = next().kind == Tok::plus ? BinaryOp::add : BinaryOp::sub;
      lhs = make(Binary{op, lhs, term()});
    }
    return lhs;
  }

  NodePtr term() {
    auto lhs = power();
    while (peek().kind == Tok::star || peek().kind == Tok::slash) {
      const auto op = next().kind == Tok::star ? BinaryOp::mul : BinaryOp::div;
      lhs = make(Binary{op, lhs, power()});
    }
    return lhs;
  }

  NodePtr power() {
    auto base = unary();
    if (peek().kind == Tok::caret) {
      next();
      return make(Binary{BinaryOp::pow, base, power()});
    }
    return base;
  }

  NodePtr unary() {
    if (peek().kind == Tok::minus) {
      next();
      return make(Negate{unary()});
    }
    if (peek().kind == Tok::plus) {
      next();
      return unary();
    }
    return primary();
  }

  NodePtr primary() {
    const auto& t = peek();
    switch (t.kind) {
      case Tok::number: {
        next();
        return make(Number{t.number, t.integer});
      }
      case Tok::lparen: {
        next();
        auto e = expr();
        if (peek().kind != Tok::rparen) fail({")"});
        next();
        return e;
      }
      case Tok::ident: {
        const Token id = next();
        if (auto fn = function_named(id.text)) {
          if (peek().kind != Tok::lparen) fail({"("});
          next();
          auto arg = expr();
          if (peek().kind != Tok::rparen) fail({")"});
          next();
          return make(Call{*fn, arg});
        }
        if (id.text == "x") return make(Variable{});
        if (id.text == "pi") return make(Constant{"pi", std::numbers::pi});
        if (id.text == "e") return make(Constant{"e", std::numbers::e});
        auto it = std::find(params_.begin(), params_.end(), id.text);
        if (it == params_.end())
          throw SyntaxError("unknown identifier '" + id.text + "' at offset " + std::to_string(id.offset), id.offset,
                            {"x", "pi", "e", "parameter", "function"});
        return make(ParamRef{id.text, static_cast<std::size_t>(it - params_.begin())});
      }
      default:
        fail({"number", "identifier", "(", "-", "+"});
    }
  }

  std::vector<Token> tokens_;
  std::span<const std::string> params_;
  std::size_t pos_ = 0;
};

// Integer exponent given as a literal, possibly negated.
std::optional<long> literal_integer(const NodePtr& n) {
  if (const auto* num = std::get_if<Number>(&n->data); num && num->integer_literal && num->value < 1e9)
    return static_cast<long>(num->value);
  if (const auto* neg = std::get_if<Negate>(&n->data)) {
    if (auto k = literal_integer(neg->operand)) return -*k;
  }
  return std::nullopt;
}

template <class T>
T ipow(T base, long k) {
  const bool invert = k < 0;
  unsigned long n = static_cast<unsigned long>(invert ? -k : k);
  T result(1.0);
  while (n) {
    if (n & 1UL) result = result * base;
    base = base * base;
    n >>= 1U;
  }
  return invert ? T(1.0) / result : result;
}

template <class T>
T eval_node(const Node& n, const T& x, std::span<const double> params) {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  using std::tan;
  using std::abs;
  using std::pow;
  return std::visit(
      [&](const auto& d) -> T {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, Number>) return T(d.value);
        else if constexpr (std::is_same_v<D, Variable>) return x;
        else if constexpr (std::is_same_v<D, Constant>) return T(d.value);
        else if constexpr (std::is_same_v<D, ParamRef>) return T(params[d.slot]);
        else if constexpr (std::is_same_v<D, Negate>) return -eval_node(*d.operand, x, params);
        else if constexpr (std::is_same_v<D, Binary>) {
          const T l = eval_node(*d.lhs, x, params);
          if (d.op == BinaryOp::pow) {
            if (auto k = literal_integer(d.rhs)) return ipow(l, *k);
            return pow(l, eval_node(*d.rhs, x, params));
          }
          const T r = eval_node(*d.rhs, x, params);
          switch (d.op) {
            case BinaryOp::add: return l + r;
            case BinaryOp::sub: return l - r;
            case BinaryOp::mul: return l * r;
            case BinaryOp::div: return l / r;
            case BinaryOp::pow: break;
          }
          return T(std::nan(""));
        } else {
          const T a = eval_node(*d.arg, x, params);
          switch (d.fn) {
            case Function::sin: return sin(a);
            case Function::cos: return cos(a);
            case Function::tan: return tan(a);
            case Function::exp: return exp(a);
            case Function::log: return log(a);
            case Function::sqrt: return sqrt(a);
            case Function::abs: return abs(a);
          }
          return T(std::nan(""));
        }
      },
      n.data);
}

std::string format_number(double v, bool integer) {
  char buf[64];
  if (integer) std::snprintf(buf, sizeof buf, "%.0f", v);
  else std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep non-integer literals non-integer on reparse.
  if (!integer && s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void print(const Node& n, std::string& out) {
  std::visit(
      [&](const auto& d) {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, Number>) out += format_number(d.value, d.integer_literal);
        else if constexpr (std::is_same_v<D, Variable>) out += "x";
        else if constexpr (std::is_same_v<D, Constant>) out += d.name;
        else if constexpr (std::is_same_v<D, ParamRef>) out += d.name;
        else if constexpr (std::is_same_v<D, Negate>) {
          out += "(-";
          print(*d.operand, out);
          out += ")";
        } else if constexpr (std::is_same_v<D, Binary>) {
          static constexpr const char* ops[] = {" + ", " - ", " * ", " / ", "^"};
          out += "(";
          print(*d.lhs, out);
          out += ops[static_cast<int>(d.op)];
          print(*d.rhs, out);
          out += ")";
        } else {
          out += function_name(d.fn);
          out += "(";
          print(*d.arg, out);
          out += ")";
        }
      },
      n.data);
}

} // namespace

Expression Expression::parse(std::string_view text, std::span<const std::string> param_names) {
  for (const auto& p : param_names) {
    if (p == "x" || p == "pi" || p == "e" || function_named(p))
      throw ParameterError("parameter name '" + p + "' is reserved");
  }
  Expression e;
  e.root_ = Parser(text, param_names).parse();
  e.params_.assign(param_names.begin(), param_names.end());
  e.source_ = std::string(text);
  return e;
}

std::string Expression::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

double Expression::evaluate(double x, std::span<const double> param_values) const {
  return eval_node<double>(*root_, x, param_values);
}

Dual Expression::evaluate(Dual x, std::span<const double> param_values) const {
  return eval_node<Dual>(*root_, x, param_values);
}

BoundExpression::BoundExpression(Expression e, const ParamMap& params) : expr_(std::move(e)) {
  values_.reserve(expr_.parameters().size());
  for (const auto& name : expr_.parameters()) {
    auto it = params.find(name);
    if (it == params.end()) throw ParameterError("unbound parameter '" + name + "'");
    values_.push_back(it->second);
  }
}

double BoundExpression::operator()(double x) const {
  const double v = expr_.evaluate(x, values_);
  if (!std::isfinite(v))
    throw DomainError("expression '" + expr_.source() + "' is non-finite at x = " + std::to_string(x));
  return v;
}

Dual BoundExpression::with_derivative(double x) const {
  const Dual v = expr_.evaluate(Dual{x, 1.0}, values_);
  if (!std::isfinite(v.v) || !std::isfinite(v.d))
    throw DomainError("expression '" + expr_.source() + "' is non-finite at x = " + std::to_string(x));
  return v;
}

ParamMap BoundExpression::bindings() const {
  ParamMap m;
  for (std::size_t i = 0; i < values_.size(); ++i) m.emplace(expr_.parameters()[i], values_[i]);
  return m;
}

double eval_ast(const Expression& e, double x, const ParamMap& params) { return BoundExpression(e, params)(x); }

} // namespace sumrules::expr
