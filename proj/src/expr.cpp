#include "semiflow/expr.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <numbers>

namespace semiflow::expr {

namespace {

NodePtr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

NodePtr leaf_const(Complex c) { return make_node({NodeKind::Const, c, 0, nullptr, nullptr}); }
NodePtr leaf_var() { return make_node({NodeKind::Var, {}, 0, nullptr, nullptr}); }
NodePtr unary(NodeKind k, NodePtr a) { return make_node({k, {}, 0, std::move(a), nullptr}); }
NodePtr binary(NodeKind k, NodePtr a, NodePtr b) {
  return make_node({k, {}, 0, std::move(a), std::move(b)});
}
NodePtr power(NodePtr a, int n) { return make_node({NodeKind::PowInt, {}, n, std::move(a), nullptr}); }

enum class TokType { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  TokType type = TokType::End;
  std::size_t offset = 0;
  double number = 0.0;
  bool is_integer = false;  // pure digit run, usable as an exponent
  long long int_value = 0;
  std::string ident;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::size_t at = pos_;
    auto simple = [at](TokType ty) {
      Token t;
      t.type = ty;
      t.offset = at;
      return t;
    };
    if (pos_ >= text_.size()) return simple(TokType::End);
    char c = text_[pos_];
    switch (c) {
      case '+': ++pos_; return simple(TokType::Plus);
      case '-': ++pos_; return simple(TokType::Minus);
      case '*': ++pos_; return simple(TokType::Star);
      case '/': ++pos_; return simple(TokType::Slash);
      case '^': ++pos_; return simple(TokType::Caret);
      case '(': ++pos_; return simple(TokType::LParen);
      case ')': ++pos_; return simple(TokType::RParen);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(at);
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      Token t = simple(TokType::Ident);
      t.ident = std::string(text_.substr(start, pos_ - start));
      return t;
    }
    throw ParseError(at, std::string("unexpected character '") + c + "'");
  }

 private:
  Token lex_number(std::size_t at) {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    bool integral = true;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      integral = false;
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        throw ParseError(pos_, "expected digits after decimal point");
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      integral = false;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        throw ParseError(pos_, "expected digits in exponent");
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    Token t;
    t.type = TokType::Number;
    t.offset = at;
    std::string_view slice = text_.substr(start, pos_ - start);
    double value = 0.0;
    auto [p, ec] = std::from_chars(slice.data(), slice.data() + slice.size(), value);
    if (ec != std::errc() || p != slice.data() + slice.size())
      throw ParseError(at, "malformed number");
    t.number = value;
    t.is_integer = integral;
    if (integral) {
      long long iv = 0;
      auto [q, ec2] = std::from_chars(slice.data(), slice.data() + slice.size(), iv);
      t.is_integer = (ec2 == std::errc() && q == slice.data() + slice.size());
      t.int_value = iv;
    }
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

const char* token_name(TokType t) {
  switch (t) {
    case TokType::Number: return "number";
    case TokType::Ident: return "identifier";
    case TokType::Plus: return "'+'";
    case TokType::Minus: return "'-'";
    case TokType::Star: return "'*'";
    case TokType::Slash: return "'/'";
    case TokType::Caret: return "'^'";
    case TokType::LParen: return "'('";
    case TokType::RParen: return "')'";
    case TokType::End: return "end of input";
  }
  return "?";
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) { advance(); }

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    if (cur_.type != TokType::End)
      throw ParseError(cur_.offset, std::string("expected end of input, found ") + token_name(cur_.type));
    return e;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (cur_.type == TokType::Plus || cur_.type == TokType::Minus) {
      NodeKind k = cur_.type == TokType::Plus ? NodeKind::Add : NodeKind::Sub;
      advance();
      lhs = binary(k, std::move(lhs), parse_term());
    }
    return lhs;
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    while (cur_.type == TokType::Star || cur_.type == TokType::Slash) {
      NodeKind k = cur_.type == TokType::Star ? NodeKind::Mul : NodeKind::Div;
      advance();
      lhs = binary(k, std::move(lhs), parse_factor());
    }
    return lhs;
  }

  NodePtr parse_factor() {
    if (cur_.type == TokType::Minus) {
      advance();
      return unary(NodeKind::Neg, parse_power());
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (cur_.type != TokType::Caret) return base;
    advance();
    std::size_t at = cur_.offset;
    bool negative = false;
    if (cur_.type == TokType::Minus) {
      negative = true;
      advance();
    }
    if (cur_.type != TokType::Number || !cur_.is_integer)
      throw ParseError(at, "expected integer exponent");
    long long n = cur_.int_value;
    if (negative) n = -n;
    if (n < -64 || n > 64) throw ParseError(at, "exponent out of range (|n| <= 64)");
    advance();
    return power(std::move(base), static_cast<int>(n));
  }

  NodePtr parse_atom() {
    switch (cur_.type) {
      case TokType::Number: {
        Complex v(cur_.number, 0.0);
        advance();
        return leaf_const(v);
      }
      case TokType::LParen: {
        advance();
        NodePtr e = parse_expr();
        if (cur_.type != TokType::RParen)
          throw ParseError(cur_.offset, std::string("expected ')', found ") + token_name(cur_.type));
        advance();
        return e;
      }
      case TokType::Ident: {
        std::string name = cur_.ident;
        std::size_t at = cur_.offset;
        advance();
        if (name == "z") return leaf_var();
        if (name == "i") return leaf_const(Complex(0.0, 1.0));
        if (name == "pi") return leaf_const(Complex(std::numbers::pi, 0.0));
        NodeKind k;
        if (name == "exp") k = NodeKind::Exp;
        else if (name == "log") k = NodeKind::Log;
        else if (name == "sqrt") k = NodeKind::Sqrt;
        else throw ParseError(at, "unknown identifier '" + name + "'");
        if (cur_.type != TokType::LParen)
          throw ParseError(cur_.offset, std::string("expected '(' after '") + name + "', found " + token_name(cur_.type));
        advance();
        NodePtr arg = parse_expr();
        if (cur_.type != TokType::RParen)
          throw ParseError(cur_.offset, std::string("expected ')', found ") + token_name(cur_.type));
        advance();
        return unary(k, std::move(arg));
      }
      default:
        throw ParseError(cur_.offset, std::string("expected expression, found ") + token_name(cur_.type));
    }
  }

  Lexer lex_;
  Token cur_;
};

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "0";
  return std::string(buf, p);
}

// Precedence levels used by the printer: Add/Sub 10, Mul/Div 20, Neg 30,
// PowInt 40, atoms 50. A child is parenthesized when its level is below the
// minimum its position requires; unary minus requires >= 40 on its operand
// so that "-a*b" never reprints as the structurally different Neg(Mul(...)).
void print_node(const Node& n, int min_level, std::string& out);

void print_child(const NodePtr& ptr, int min_level, std::string& out) {
  print_node(*ptr, min_level, out);
}

int node_level(const Node& n) {
  switch (n.kind) {
    case NodeKind::Add:
    case NodeKind::Sub: return 10;
    case NodeKind::Mul:
    case NodeKind::Div: return 20;
    case NodeKind::Neg: return 30;
    case NodeKind::PowInt: return 40;
    default: return 50;
  }
}

void print_node(const Node& n, int min_level, std::string& out) {
  int level = node_level(n);
  bool paren = level < min_level;
  if (paren) out += '(';
  switch (n.kind) {
    case NodeKind::Const: {
      Complex c = n.value;
      if (c == Complex(0.0, 1.0)) {
        out += 'i';
      } else if (c.imag() == 0.0 && c.real() >= 0.0 && !std::signbit(c.real())) {
        out += format_double(c.real());
      } else {
        // Not parser-reachable; emit an equivalent canonical subexpression.
        out += '(';
        out += format_double(c.real());
        out += c.imag() < 0.0 ? '-' : '+';
        out += format_double(std::abs(c.imag()));
        out += "*i)";
      }
      break;
    }
    case NodeKind::Var: out += 'z'; break;
    case NodeKind::Neg:
      out += '-';
      print_child(n.lhs, 40, out);
      break;
    case NodeKind::Add:
      print_child(n.lhs, 10, out);
      out += '+';
      print_child(n.rhs, 11, out);
      break;
    case NodeKind::Sub:
      print_child(n.lhs, 10, out);
      out += '-';
      print_child(n.rhs, 11, out);
      break;
    case NodeKind::Mul:
      print_child(n.lhs, 20, out);
      out += '*';
      print_child(n.rhs, 21, out);
      break;
    case NodeKind::Div:
      print_child(n.lhs, 20, out);
      out += '/';
      print_child(n.rhs, 21, out);
      break;
    case NodeKind::PowInt:
      print_child(n.lhs, 50, out);
      out += '^';
      out += std::to_string(n.exponent);
      break;
    case NodeKind::Exp:
    case NodeKind::Log:
    case NodeKind::Sqrt:
      out += n.kind == NodeKind::Exp ? "exp" : n.kind == NodeKind::Log ? "log" : "sqrt";
      out += '(';
      print_child(n.lhs, 0, out);
      out += ')';
      break;
  }
  if (paren) out += ')';
}

Jet3 eval_node(const Node& n, Complex z) {
  switch (n.kind) {
    case NodeKind::Const: return Jet3::constant(n.value);
    case NodeKind::Var: return Jet3::variable(z);
    case NodeKind::Neg: return -eval_node(*n.lhs, z);
    case NodeKind::Add: return eval_node(*n.lhs, z) + eval_node(*n.rhs, z);
    case NodeKind::Sub: return eval_node(*n.lhs, z) - eval_node(*n.rhs, z);
    case NodeKind::Mul: return eval_node(*n.lhs, z) * eval_node(*n.rhs, z);
    case NodeKind::Div: return eval_node(*n.lhs, z) / eval_node(*n.rhs, z);
    case NodeKind::PowInt: return jet_pow(eval_node(*n.lhs, z), n.exponent);
    case NodeKind::Exp: return jet_exp(eval_node(*n.lhs, z));
    case NodeKind::Log: return jet_log(eval_node(*n.lhs, z));
    case NodeKind::Sqrt: return jet_sqrt(eval_node(*n.lhs, z));
  }
  throw Error(ErrorCode::InvalidParameter, "corrupt expression node");
}

Complex pow_value(Complex a, int n) {
  if (n < 0) {
    if (a == Complex(0.0)) throw Error(ErrorCode::DivisionByZero, "zero base with negative exponent");
    return Complex(1.0) / pow_value(a, -n);
  }
  Complex result(1.0);
  Complex base = a;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

Complex eval_value_node(const Node& n, Complex z) {
  switch (n.kind) {
    case NodeKind::Const: return n.value;
    case NodeKind::Var: return z;
    case NodeKind::Neg: return -eval_value_node(*n.lhs, z);
    case NodeKind::Add: return eval_value_node(*n.lhs, z) + eval_value_node(*n.rhs, z);
    case NodeKind::Sub: return eval_value_node(*n.lhs, z) - eval_value_node(*n.rhs, z);
    case NodeKind::Mul: return eval_value_node(*n.lhs, z) * eval_value_node(*n.rhs, z);
    case NodeKind::Div: {
      Complex d = eval_value_node(*n.rhs, z);
      if (d == Complex(0.0)) throw Error(ErrorCode::DivisionByZero, "division by zero");
      return eval_value_node(*n.lhs, z) / d;
    }
    case NodeKind::PowInt: return pow_value(eval_value_node(*n.lhs, z), n.exponent);
    case NodeKind::Exp: return std::exp(eval_value_node(*n.lhs, z));
    case NodeKind::Log: {
      Complex a = eval_value_node(*n.lhs, z);
      if (on_branch_cut(a)) throw Error(ErrorCode::BranchCut, "log argument on (-inf, 0]");
      return std::log(a);
    }
    case NodeKind::Sqrt: {
      Complex a = eval_value_node(*n.lhs, z);
      if (on_branch_cut(a)) throw Error(ErrorCode::BranchCut, "sqrt argument on (-inf, 0]");
      return std::sqrt(a);
    }
  }
  throw Error(ErrorCode::InvalidParameter, "corrupt expression node");
}

bool equal_node(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Const: return a.value == b.value;
    case NodeKind::Var: return true;
    case NodeKind::PowInt:
      return a.exponent == b.exponent && equal_node(*a.lhs, *b.lhs);
    case NodeKind::Neg:
    case NodeKind::Exp:
    case NodeKind::Log:
    case NodeKind::Sqrt:
      return equal_node(*a.lhs, *b.lhs);
    default:
      return equal_node(*a.lhs, *b.lhs) && equal_node(*a.rhs, *b.rhs);
  }
}

std::size_t count_nodes(const Node& n) {
  std::size_t c = 1;
  if (n.lhs) c += count_nodes(*n.lhs);
  if (n.rhs) c += count_nodes(*n.rhs);
  return c;
}

void require_valid(const AnalyticExpr& e) {
  if (!e.valid()) throw Error(ErrorCode::InvalidParameter, "empty expression");
}

}  // namespace

AnalyticExpr parse(std::string_view text) {
  Parser p(text);
  return AnalyticExpr(p.parse_all());
}

std::string pretty_print(const AnalyticExpr& e) {
  require_valid(e);
  std::string out;
  print_node(e.root(), 0, out);
  return out;
}

bool structurally_equal(const AnalyticExpr& a, const AnalyticExpr& b) {
  if (!a.valid() || !b.valid()) return a.valid() == b.valid();
  return equal_node(a.root(), b.root());
}

std::size_t node_count(const AnalyticExpr& e) {
  require_valid(e);
  return count_nodes(e.root());
}

Jet3 eval_jet(const AnalyticExpr& e, Complex z) {
  require_valid(e);
  Jet3 r = eval_node(e.root(), z);
  if (!jet_finite(r)) throw Error(ErrorCode::Overflow, "non-finite jet component");
  return r;
}

Complex eval(const AnalyticExpr& e, Complex z) {
  require_valid(e);
  Complex r = eval_value_node(e.root(), z);
  if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
    throw Error(ErrorCode::Overflow, "non-finite value");
  return r;
}

AnalyticExpr var() { return AnalyticExpr(leaf_var()); }

AnalyticExpr constant(double re) {
  if (re == 0.0) return AnalyticExpr(leaf_const(Complex(0.0, 0.0)));
  if (re < 0.0) return AnalyticExpr(unary(NodeKind::Neg, leaf_const(Complex(-re, 0.0))));
  return AnalyticExpr(leaf_const(Complex(re, 0.0)));
}

AnalyticExpr constant(Complex c) {
  if (c.imag() == 0.0) return constant(c.real());
  NodePtr im_unit = leaf_const(Complex(0.0, 1.0));
  double b = std::abs(c.imag());
  NodePtr im_part = b == 1.0 ? std::move(im_unit)
                             : binary(NodeKind::Mul, leaf_const(Complex(b, 0.0)), std::move(im_unit));
  if (c.real() == 0.0) {
    if (c.imag() < 0.0) return AnalyticExpr(unary(NodeKind::Neg, std::move(im_part)));
    return AnalyticExpr(std::move(im_part));
  }
  NodePtr re_part = constant(c.real()).root_ptr();
  NodeKind join = c.imag() < 0.0 ? NodeKind::Sub : NodeKind::Add;
  return AnalyticExpr(binary(join, std::move(re_part), std::move(im_part)));
}

AnalyticExpr neg(AnalyticExpr a) { return AnalyticExpr(unary(NodeKind::Neg, a.root_ptr())); }
AnalyticExpr add(AnalyticExpr a, AnalyticExpr b) { return AnalyticExpr(binary(NodeKind::Add, a.root_ptr(), b.root_ptr())); }
AnalyticExpr sub(AnalyticExpr a, AnalyticExpr b) { return AnalyticExpr(binary(NodeKind::Sub, a.root_ptr(), b.root_ptr())); }
AnalyticExpr mul(AnalyticExpr a, AnalyticExpr b) { return AnalyticExpr(binary(NodeKind::Mul, a.root_ptr(), b.root_ptr())); }
AnalyticExpr div(AnalyticExpr a, AnalyticExpr b) { return AnalyticExpr(binary(NodeKind::Div, a.root_ptr(), b.root_ptr())); }

AnalyticExpr pow_int(AnalyticExpr a, int n) {
  if (n < -64 || n > 64) throw Error(ErrorCode::InvalidParameter, "exponent out of range (|n| <= 64)");
  return AnalyticExpr(power(a.root_ptr(), n));
}

AnalyticExpr exp_of(AnalyticExpr a) { return AnalyticExpr(unary(NodeKind::Exp, a.root_ptr())); }
AnalyticExpr log_of(AnalyticExpr a) { return AnalyticExpr(unary(NodeKind::Log, a.root_ptr())); }
AnalyticExpr sqrt_of(AnalyticExpr a) { return AnalyticExpr(unary(NodeKind::Sqrt, a.root_ptr())); }

}  // namespace semiflow::expr
