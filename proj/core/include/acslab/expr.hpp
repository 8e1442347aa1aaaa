#pragma once

// Scalar expressions over the coordinates x1..x4:
//   expr := term (('+' | '-') term)*
//   term := unary (('*' | '/') unary)*
//   unary := ('-' | '+') unary | primary
//   primary := number | pi | x1..x4 | (sin | cos | exp) '(' expr ')' | '(' expr ')'

#include <memory>
#include <string>

#include <Eigen/Dense>

#include "acslab/grid.hpp"

namespace acslab {

class Expression {
 public:
  /// Throws ParseError.
  static Expression parse(const std::string& text);

  double operator()(const Eigen::Vector4d& x) const;
  const std::string& text() const { return text_; }
  ScalarField sample(const GridChart& chart) const;

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace acslab
