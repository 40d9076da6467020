#pragma once

// Logarithmico-exponential expressions in one variable t.
//
// Text grammar (parse and str() are inverse up to whitespace):
//   expr  := term (('+' | '-') term)*
//   term  := unary (('*' | '/') unary)*
//   unary := '-' unary | power
//   power := atom ('^' unary)?
//   atom  := number | 't' | sqrt2 | sqrt3 | sqrt5 | phi | pi | e
//          | ln(expr) | log(expr) | exp(expr) | sqrt(expr) | '(' expr ')'
// Exponents must be constant subexpressions. Decimal literals are exact
// (0.25 == 1/4) but keep their spelling when printed.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "ergolab/rational.hpp"
#include "ergolab/real.hpp"

namespace ergolab {

enum class Op : std::uint8_t { Const, Named, Var, Add, Sub, Mul, Div, Neg, Pow, Ln, Exp };

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  Op op = Op::Const;
  Rational value;                       // Op::Const
  bool decimal = false;                 // Op::Const entered as a decimal literal
  NamedConst named = NamedConst::Pi;    // Op::Named
  NodePtr lhs;                          // unary operand or left operand
  NodePtr rhs;                          // right operand / exponent
  bool has_var = false;
  std::uint32_t size = 1;
};

class HardyExpr {
 public:
  HardyExpr();  // the constant 0
  explicit HardyExpr(NodePtr node);

  static HardyExpr constant(const Rational& q, bool decimal = false);
  static HardyExpr named(NamedConst c);
  static HardyExpr var();
  /// Throws ParseError with the offending position.
  static HardyExpr parse(std::string_view text);

  std::string str() const;

  const ExprNode& node() const { return *node_; }
  const NodePtr& ptr() const { return node_; }
  Op op() const { return node_->op; }
  HardyExpr lhs() const { return HardyExpr(node_->lhs); }
  HardyExpr rhs() const { return HardyExpr(node_->rhs); }

  bool is_constant() const { return !node_->has_var; }
  std::optional<Rational> as_rational() const;
  bool contains(Op op) const;
  /// True if any constant was entered as a decimal literal. Such constants
  /// are kept unfolded and are not trusted for rationality decisions.
  bool has_decimal() const;
  std::uint32_t size() const { return node_->size; }

  /// Replaces every occurrence of t by `replacement`.
  HardyExpr substitute(const HardyExpr& replacement) const;
  /// f(t + r).
  HardyExpr shifted(const Rational& r) const;

  friend HardyExpr operator+(const HardyExpr& a, const HardyExpr& b);
  friend HardyExpr operator-(const HardyExpr& a, const HardyExpr& b);
  friend HardyExpr operator*(const HardyExpr& a, const HardyExpr& b);
  friend HardyExpr operator/(const HardyExpr& a, const HardyExpr& b);
  HardyExpr operator-() const;

  friend bool operator==(const HardyExpr& a, const HardyExpr& b);
  friend bool operator!=(const HardyExpr& a, const HardyExpr& b) { return !(a == b); }

 private:
  NodePtr node_;
};

HardyExpr pow(const HardyExpr& base, const HardyExpr& exponent);
HardyExpr pow(const HardyExpr& base, const Rational& exponent);
HardyExpr ln(const HardyExpr& a);
HardyExpr exp(const HardyExpr& a);

/// Symbolic derivative of the given order (order >= 1).
HardyExpr differentiate(const HardyExpr& expr, int order = 1);

}  // namespace ergolab
