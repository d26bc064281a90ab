#include "isosurf/expr.hpp"

#include <cmath>

#include "isosurf/errors.hpp"

namespace isosurf {

struct Expr::Node {
  Op op = Op::Constant;
  double constant = 0.0;
  int exponent = 0;
  std::vector<Expr> args;
};

Expr::Expr(double c) : node_(std::make_shared<const Node>(Node{Op::Constant, c, 0, {}})) {}
Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::u() { return Expr(std::make_shared<const Node>(Node{Op::U, 0.0, 0, {}})); }
Expr Expr::v() { return Expr(std::make_shared<const Node>(Node{Op::V, 0.0, 0, {}})); }

Expr Expr::make(Op op, std::vector<Expr> args, double constant, int exponent) {
  std::size_t arity = 0;
  switch (op) {
    case Op::Constant:
    case Op::U:
    case Op::V:
      arity = 0;
      break;
    case Op::Neg:
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Sqrt:
    case Op::Pow:
      arity = 1;
      break;
    case Op::Sub:
    case Op::Div:
      arity = 2;
      break;
    case Op::Add:
    case Op::Mul:
      if (args.empty()) throw ValidationError(op_name(op) + " needs at least one argument");
      arity = args.size();
      break;
  }
  if (args.size() != arity) {
    throw ValidationError(op_name(op) + " expects " + std::to_string(arity) + " argument(s)");
  }
  return Expr(std::make_shared<const Node>(Node{op, constant, exponent, std::move(args)}));
}

Expr::Op Expr::op() const { return node_->op; }
double Expr::constant() const { return node_->constant; }
int Expr::exponent() const { return node_->exponent; }
const std::vector<Expr>& Expr::args() const { return node_->args; }

Jet2 Expr::evaluate(const Jet2& u, const Jet2& v) const {
  const auto& a = node_->args;
  switch (node_->op) {
    case Op::Constant:
      return Jet2(u.order(), node_->constant);
    case Op::U:
      return u;
    case Op::V:
      return v;
    case Op::Add: {
      Jet2 acc = a[0].evaluate(u, v);
      for (std::size_t i = 1; i < a.size(); ++i) acc += a[i].evaluate(u, v);
      return acc;
    }
    case Op::Mul: {
      Jet2 acc = a[0].evaluate(u, v);
      for (std::size_t i = 1; i < a.size(); ++i) acc = acc * a[i].evaluate(u, v);
      return acc;
    }
    case Op::Sub:
      return a[0].evaluate(u, v) - a[1].evaluate(u, v);
    case Op::Div:
      return a[0].evaluate(u, v) / a[1].evaluate(u, v);
    case Op::Neg:
      return -a[0].evaluate(u, v);
    case Op::Sin:
      return isosurf::sin(a[0].evaluate(u, v));
    case Op::Cos:
      return isosurf::cos(a[0].evaluate(u, v));
    case Op::Exp:
      return isosurf::exp(a[0].evaluate(u, v));
    case Op::Sqrt:
      return isosurf::sqrt(a[0].evaluate(u, v));
    case Op::Pow:
      return isosurf::pow(a[0].evaluate(u, v), node_->exponent);
  }
  throw ValidationError("unknown expression op");
}

double Expr::evaluate(double u, double v) const {
  return evaluate(Jet2(0, u), Jet2(0, v)).value();
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::make(Expr::Op::Add, {a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::make(Expr::Op::Sub, {a, b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::make(Expr::Op::Mul, {a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::make(Expr::Op::Div, {a, b}); }
Expr operator-(const Expr& a) { return Expr::make(Expr::Op::Neg, {a}); }
Expr sin(const Expr& a) { return Expr::make(Expr::Op::Sin, {a}); }
Expr cos(const Expr& a) { return Expr::make(Expr::Op::Cos, {a}); }
Expr exp(const Expr& a) { return Expr::make(Expr::Op::Exp, {a}); }
Expr sqrt(const Expr& a) { return Expr::make(Expr::Op::Sqrt, {a}); }
Expr pow(const Expr& a, int n) { return Expr::make(Expr::Op::Pow, {a}, 0.0, n); }

std::string op_name(Expr::Op op) {
  switch (op) {
    case Expr::Op::Constant: return "const";
    case Expr::Op::U: return "u";
    case Expr::Op::V: return "v";
    case Expr::Op::Add: return "add";
    case Expr::Op::Sub: return "sub";
    case Expr::Op::Mul: return "mul";
    case Expr::Op::Div: return "div";
    case Expr::Op::Neg: return "neg";
    case Expr::Op::Sin: return "sin";
    case Expr::Op::Cos: return "cos";
    case Expr::Op::Exp: return "exp";
    case Expr::Op::Sqrt: return "sqrt";
    case Expr::Op::Pow: return "pow";
  }
  return "?";
}

}  // namespace isosurf
