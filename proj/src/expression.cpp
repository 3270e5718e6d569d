#include "proper_lift/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "proper_lift/errors.hpp"

namespace proper_lift {

struct Expression::Node {
  enum class Kind { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
  Kind kind = Kind::Constant;
  double value = 0.0;
  std::size_t variable = 0;
  double (*function)(double) = nullptr;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;

  double eval(std::span<const double> vars) const {
    switch (kind) {
      case Kind::Constant: return value;
      case Kind::Variable: return vars[variable];
      case Kind::Negate: return -lhs->eval(vars);
      case Kind::Add: return lhs->eval(vars) + rhs->eval(vars);
      case Kind::Sub: return lhs->eval(vars) - rhs->eval(vars);
      case Kind::Mul: return lhs->eval(vars) * rhs->eval(vars);
      case Kind::Div: return lhs->eval(vars) / rhs->eval(vars);
      case Kind::Pow: return std::pow(lhs->eval(vars), rhs->eval(vars));
      case Kind::Call: return function(lhs->eval(vars));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

double fn_sin(double x) { return std::sin(x); }
double fn_cos(double x) { return std::cos(x); }
double fn_tan(double x) { return std::tan(x); }
double fn_exp(double x) { return std::exp(x); }
double fn_log(double x) { return std::log(x); }
double fn_sqrt(double x) { return std::sqrt(x); }
double fn_abs(double x) { return std::abs(x); }

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

  NodePtr parse() {
    auto n = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return n;
  }

 private:
  // expr := term (('+'|'-') term)*
  NodePtr expr() {
    auto n = term();
    for (;;) {
      skip();
      if (accept('+')) n = make(Kind::Add, n, term());
      else if (accept('-')) n = make(Kind::Sub, n, term());
      else return n;
    }
  }
  // term := unary (('*'|'/') unary)*
  NodePtr term() {
    auto n = unary();
    for (;;) {
      skip();
      if (accept('*')) n = make(Kind::Mul, n, unary());
      else if (accept('/')) n = make(Kind::Div, n, unary());
      else return n;
    }
  }
  // unary := '-' unary | power
  NodePtr unary() {
    skip();
    if (accept('-')) return make(Kind::Negate, unary());
    if (accept('+')) return unary();
    return power();
  }
  // power := primary ('^' unary)?   (right associative)
  NodePtr power() {
    auto n = primary();
    skip();
    if (accept('^')) return make(Kind::Pow, n, unary());
    return n;
  }
  NodePtr primary() {
    skip();
    if (accept('(')) {
      auto n = expr();
      skip();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      return number();
    if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      return identifier();
    fail("expected a number, identifier or '('");
  }
  NodePtr number() {
    const std::string s(text_.substr(pos_));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      fail("malformed number");
    }
    pos_ += used;
    auto n = std::make_shared<Expression::Node>();
    n->value = v;
    return n;
  }
  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == name) {
        auto n = std::make_shared<Expression::Node>();
        n->kind = Kind::Variable;
        n->variable = i;
        return n;
      }
    }
    if (name == "pi" || name == "e") {
      auto n = std::make_shared<Expression::Node>();
      n->value = name == "pi" ? std::numbers::pi : std::numbers::e;
      return n;
    }
    double (*f)(double) = nullptr;
    if (name == "sin") f = fn_sin;
    else if (name == "cos") f = fn_cos;
    else if (name == "tan") f = fn_tan;
    else if (name == "exp") f = fn_exp;
    else if (name == "log") f = fn_log;
    else if (name == "sqrt") f = fn_sqrt;
    else if (name == "abs") f = fn_abs;
    else fail("unknown identifier '" + name + "'");
    skip();
    if (!accept('(')) fail("expected '(' after " + name);
    auto arg = expr();
    skip();
    if (!accept(')')) fail("expected ')'");
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::Call;
    n->function = f;
    n->lhs = std::move(arg);
    return n;
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " + what);
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text, std::vector<std::string> variables) {
  Expression e;
  e.text_ = std::string(text);
  e.root_ = Parser(e.text_, variables).parse();
  return e;
}

double Expression::operator()(std::span<const double> values) const { return root_->eval(values); }

}  // namespace proper_lift
