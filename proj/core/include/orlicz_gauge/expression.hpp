#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace orlicz {

/// Closed-form scalar expression in a single index variable `n`, used to
/// parameterize function sequences from configuration files.
///
/// Grammar: numbers, `n`, the constants `pi` and `e`, binary `+ - * / ^`
/// (`^` is right associative), unary minus, parentheses and the functions
/// exp, log, sqrt, abs, sin, cos, tan, pow(a, b), min(a, b), max(a, b).
class ParamExpression {
 public:
  /// Throws Error(kValidation) on a syntax error.
  explicit ParamExpression(std::string_view source);

  double evaluate(double n) const;
  const std::string& source() const noexcept { return source_; }

  struct Node;

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

double evaluate_expression(std::string_view source, double n);

}  // namespace orlicz
