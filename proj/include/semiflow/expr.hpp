#pragma once

#include <complex>
#include <memory>
#include <string>
#include <string_view>

#include "semiflow/jet.hpp"

namespace semiflow::expr {

enum class NodeKind { Const, Var, Neg, Add, Sub, Mul, Div, PowInt, Exp, Log, Sqrt };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind;
  Complex value{};   // Const payload
  int exponent = 0;  // PowInt payload, |exponent| <= 64
  NodePtr lhs;       // unary operand / left operand
  NodePtr rhs;       // right operand
};

// Immutable analytic expression in one variable z. Copies share the tree;
// all operations on it are pure and safe for concurrent use.
class AnalyticExpr {
 public:
  AnalyticExpr() = default;
  explicit AnalyticExpr(NodePtr root) : root_(std::move(root)) {}

  bool valid() const { return root_ != nullptr; }
  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }

 private:
  NodePtr root_;
};

// Grammar:
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := ("-")? power
//   power  := atom ("^" integer)?
//   atom   := number | "i" | "pi" | "z" | "(" expr ")" | func "(" expr ")"
//   func   := "exp" | "log" | "sqrt"
// Whitespace insignificant, case-sensitive. Throws ParseError with a 0-based
// byte offset and an expected-token message.
AnalyticExpr parse(std::string_view text);

// Canonical text form; parse(pretty_print(e)) is structurally identical to e
// for every parser- or builder-produced tree.
std::string pretty_print(const AnalyticExpr& e);

bool structurally_equal(const AnalyticExpr& a, const AnalyticExpr& b);

std::size_t node_count(const AnalyticExpr& e);

// Value plus derivatives of orders 1..3 at z. Throws DivisionByZero,
// BranchCut, or Overflow.
Jet3 eval_jet(const AnalyticExpr& e, Complex z);

// Value only (same domain checks as eval_jet).
Complex eval(const AnalyticExpr& e, Complex z);

// ---- Builders (canonical, round-trip-stable trees) ----

AnalyticExpr var();
AnalyticExpr constant(double re);
AnalyticExpr constant(Complex c);
AnalyticExpr neg(AnalyticExpr a);
AnalyticExpr add(AnalyticExpr a, AnalyticExpr b);
AnalyticExpr sub(AnalyticExpr a, AnalyticExpr b);
AnalyticExpr mul(AnalyticExpr a, AnalyticExpr b);
AnalyticExpr div(AnalyticExpr a, AnalyticExpr b);
AnalyticExpr pow_int(AnalyticExpr a, int n);
AnalyticExpr exp_of(AnalyticExpr a);
AnalyticExpr log_of(AnalyticExpr a);
AnalyticExpr sqrt_of(AnalyticExpr a);

inline AnalyticExpr operator-(AnalyticExpr a) { return neg(std::move(a)); }
inline AnalyticExpr operator+(AnalyticExpr a, AnalyticExpr b) { return add(std::move(a), std::move(b)); }
inline AnalyticExpr operator-(AnalyticExpr a, AnalyticExpr b) { return sub(std::move(a), std::move(b)); }
inline AnalyticExpr operator*(AnalyticExpr a, AnalyticExpr b) { return mul(std::move(a), std::move(b)); }
inline AnalyticExpr operator/(AnalyticExpr a, AnalyticExpr b) { return div(std::move(a), std::move(b)); }
inline AnalyticExpr operator*(Complex c, AnalyticExpr b) { return mul(constant(c), std::move(b)); }

}  // namespace semiflow::expr
