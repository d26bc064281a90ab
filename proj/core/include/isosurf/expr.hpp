#pragma once

#include <memory>
#include <string>
#include <vector>

#include "isosurf/jet.hpp"

namespace isosurf {

/// Immutable expression tree over the parameters u, v built from a fixed set
/// of primitives (constants, +, -, *, /, integer powers, sin, cos, exp, sqrt).
/// The primitive set is closed under jet arithmetic, so every chart built from
/// it has exact derivatives of any order.
class Expr {
 public:
  enum class Op { Constant, U, V, Add, Sub, Mul, Div, Neg, Sin, Cos, Exp, Sqrt, Pow };

  Expr(double c);  // NOLINT(google-explicit-constructor): literals read naturally in formulas
  static Expr u();
  static Expr v();

  Op op() const;
  double constant() const;
  int exponent() const;
  const std::vector<Expr>& args() const;

  Jet2 evaluate(const Jet2& u, const Jet2& v) const;
  double evaluate(double u, double v) const;

  static Expr make(Op op, std::vector<Expr> args, double constant = 0.0, int exponent = 0);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);
Expr sqrt(const Expr& a);
Expr pow(const Expr& a, int n);

std::string op_name(Expr::Op op);

}  // namespace isosurf
