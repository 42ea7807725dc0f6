#include "radelast/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <vector>

namespace radelast {

struct Expression::Node {
  enum class Kind { number, variable, unary_minus, binary, call } kind = Kind::number;
  double number = 0.0;
  std::string name;
  char op = 0;
  std::vector<std::unique_ptr<Node>> args;
};

namespace {

using Node = Expression::Node;

double (*lookup_function(const std::string& name))(double) {
  static const std::map<std::string, double (*)(double)> table = {
      {"sin", [](double x) { return std::sin(x); }},   {"cos", [](double x) { return std::cos(x); }},
      {"tan", [](double x) { return std::tan(x); }},   {"exp", [](double x) { return std::exp(x); }},
      {"log", [](double x) { return std::log(x); }},   {"sqrt", [](double x) { return std::sqrt(x); }},
      {"cbrt", [](double x) { return std::cbrt(x); }}, {"abs", [](double x) { return std::abs(x); }},
      {"tanh", [](double x) { return std::tanh(x); }},
  };
  const auto it = table.find(name);
  return it == table.end() ? nullptr : it->second;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  std::unique_ptr<Node> parse() {
    auto n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ExpressionError("expression \"" + s_ + "\" at offset " + std::to_string(pos_) + ": " + msg);
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

  static std::unique_ptr<Node> binary(char op, std::unique_ptr<Node> a, std::unique_ptr<Node> b) {
    auto n = std::make_unique<Node>();
    n->kind = Node::Kind::binary;
    n->op = op;
    n->args.push_back(std::move(a));
    n->args.push_back(std::move(b));
    return n;
  }

  std::unique_ptr<Node> expr() {
    auto n = term();
    for (;;) {
      if (accept('+')) n = binary('+', std::move(n), term());
      else if (accept('-')) n = binary('-', std::move(n), term());
      else return n;
    }
  }

  std::unique_ptr<Node> term() {
    auto n = unary();
    for (;;) {
      if (accept('*')) n = binary('*', std::move(n), unary());
      else if (accept('/')) n = binary('/', std::move(n), unary());
      else return n;
    }
  }

  std::unique_ptr<Node> unary() {
    if (accept('-')) {
      auto n = std::make_unique<Node>();
      n->kind = Node::Kind::unary_minus;
      n->args.push_back(unary());
      return n;
    }
    if (accept('+')) return unary();
    return power();
  }

  // -x^2 parses as -(x^2); 2^3^2 as 2^(3^2).
  std::unique_ptr<Node> power() {
    auto base = primary();
    if (accept('^')) return binary('^', std::move(base), unary());
    return base;
  }

  std::unique_ptr<Node> primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (accept('(')) {
      auto n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double x = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_unique<Node>();
      n->number = x;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      auto n = std::make_unique<Node>();
      n->name = s_.substr(start, pos_ - start);
      if (accept('(')) {
        if (!lookup_function(n->name)) fail("unknown function '" + n->name + "'");
        n->kind = Node::Kind::call;
        n->args.push_back(expr());
        if (!accept(')')) fail("expected ')'");
      } else {
        n->kind = Node::Kind::variable;
      }
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval_node(const Node& n, const std::map<std::string, double>& vars) {
  switch (n.kind) {
    case Node::Kind::number: return n.number;
    case Node::Kind::variable: {
      const auto it = vars.find(n.name);
      if (it == vars.end()) throw ExpressionError("unknown variable '" + n.name + "'");
      return it->second;
    }
    case Node::Kind::unary_minus: return -eval_node(*n.args[0], vars);
    case Node::Kind::call: return lookup_function(n.name)(eval_node(*n.args[0], vars));
    case Node::Kind::binary: {
      const double a = eval_node(*n.args[0], vars);
      const double b = eval_node(*n.args[1], vars);
      switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        default: return std::pow(a, b);
      }
    }
  }
  return 0.0;
}

}  // namespace

Expression::Expression(const std::string& text) : text_(text), root_(Parser(text_).parse()) {}
Expression::~Expression() = default;
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;

double Expression::eval(const std::map<std::string, double>& vars) const { return eval_node(*root_, vars); }

}  // namespace radelast
