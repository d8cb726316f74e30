#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mpass/linalg.hpp"

namespace mpass {

/// Expression AST over variables x1..xn.
///
/// Grammar (whitespace-insensitive):
///
///     expr   := term (("+"|"-") term)* ;
///     term   := factor (("*"|"/") factor)* ;
///     factor := "-" factor | base ("^" INTEGER)? ;
///     base   := NUMBER | VAR | "(" expr ")" | FUNC "(" expr ("," expr)* ")" ;
///     VAR    := "x" DIGIT+ ;   FUNC := "abs"|"max"|"min"|"sqrt"|"norm" ;
///
/// Unary minus is accepted in `factor` so that "-x1" is expressible.
class Expression {
 public:
  enum class Op { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Abs, Max, Min, Sqrt, Norm };

  struct Node {
    Op op = Op::Constant;
    double value = 0.0;  // Constant
    int index = 0;       // Variable: 0-based; Pow: exponent
    std::vector<std::shared_ptr<const Node>> args;
  };
  using NodePtr = std::shared_ptr<const Node>;

  /// Throws ParseError on syntax errors, unknown identifiers and arity mismatches.
  static Expression parse(std::string_view text, int dim);

  int dim() const { return dim_; }
  const Node& root() const { return *root_; }

  /// Canonical, fully parenthesised text; parse(to_string()) reproduces the AST.
  std::string to_string() const;

  /// Throws DomainError for sqrt of a negative number or division by zero.
  double evaluate(const Vec& x) const;

  /// Value and forward-mode gradient. Valid off the nonsmooth locus.
  double evaluate_with_gradient(const Vec& x, Vec& gradient) const;

  /// True when an abs/max/min/sqrt/norm argument sits within
  /// 1e-9 * (1 + |value|) of its kink.
  bool near_kink(const Vec& x) const;

  /// Constructs that can break global Lipschitz continuity (sqrt, division
  /// by a non-constant). Parsing succeeds; the flags travel with the field.
  const std::vector<std::string>& warnings() const { return warnings_; }
  bool lipschitz_clean() const { return warnings_.empty(); }

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  Expression(NodePtr root, int dim);

  NodePtr root_;
  int dim_ = 0;
  std::vector<std::string> warnings_;
};

bool structurally_equal(const Expression::Node& a, const Expression::Node& b);

}  // namespace mpass
