#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

namespace radelast {

class ExpressionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Small arithmetic expression: + - * / ^ (right associative), unary minus,
 * parentheses, numbers, named variables, and sin cos tan exp log sqrt cbrt
 * abs tanh. Parsed once, evaluated many times.
 */
class Expression {
 public:
  explicit Expression(const std::string& text);
  ~Expression();
  Expression(Expression&&) noexcept;
  Expression& operator=(Expression&&) noexcept;

  double eval(const std::map<std::string, double>& vars) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::unique_ptr<Node> root_;
};

}  // namespace radelast
