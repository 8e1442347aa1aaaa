#include "acslab/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "acslab/errors.hpp"

namespace acslab {

struct Expression::Node {
  enum class Kind { Number, Coordinate, Add, Sub, Mul, Div, Neg, Sin, Cos, Exp } kind;
  double value = 0.0;
  int axis = 0;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(const Eigen::Vector4d& x) const {
    switch (kind) {
      case Kind::Number: return value;
      case Kind::Coordinate: return x[axis];
      case Kind::Add: return args[0]->eval(x) + args[1]->eval(x);
      case Kind::Sub: return args[0]->eval(x) - args[1]->eval(x);
      case Kind::Mul: return args[0]->eval(x) * args[1]->eval(x);
      case Kind::Div: return args[0]->eval(x) / args[1]->eval(x);
      case Kind::Neg: return -args[0]->eval(x);
      case Kind::Sin: return std::sin(args[0]->eval(x));
      case Kind::Cos: return std::cos(args[0]->eval(x));
      case Kind::Exp: return std::exp(args[0]->eval(x));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, std::vector<NodePtr> args = {}) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::ParseError,
                "expression \"" + s_ + "\" at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Kind::Add, {lhs, term()});
      } else if (accept('-')) {
        lhs = make(Kind::Sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Kind::Mul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make(Kind::Div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::Neg, {unary()});
    if (accept('+')) return unary();
    return primary();
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (accept('(')) {
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      auto [end, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
      if (ec != std::errc()) fail("bad number");
      pos_ = static_cast<std::size_t>(end - s_.data());
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::Number;
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string word = s_.substr(start, pos_ - start);
      if (word == "pi") {
        auto n = std::make_shared<Expression::Node>();
        n->kind = Kind::Number;
        n->value = std::numbers::pi;
        return n;
      }
      if (word.size() == 2 && word[0] == 'x' && word[1] >= '1' && word[1] <= '4') {
        auto n = std::make_shared<Expression::Node>();
        n->kind = Kind::Coordinate;
        n->axis = word[1] - '1';
        return n;
      }
      Kind k;
      if (word == "sin") {
        k = Kind::Sin;
      } else if (word == "cos") {
        k = Kind::Cos;
      } else if (word == "exp") {
        k = Kind::Exp;
      } else {
        pos_ = start;
        fail("unknown identifier '" + word + "'");
      }
      if (!accept('(')) fail("expected '(' after " + word);
      NodePtr arg = expr();
      if (!accept(')')) fail("expected ')'");
      return make(k, {arg});
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text).parse();
  return e;
}

double Expression::operator()(const Eigen::Vector4d& x) const { return root_->eval(x); }

ScalarField Expression::sample(const GridChart& chart) const {
  return ScalarField::sample(chart, [this](const Eigen::Vector4d& x) { return (*this)(x); });
}

}  // namespace acslab
