#include <doctest.h>

#include "semiflow/expr.hpp"
#include "support/oracles.hpp"

using namespace semiflow;
using expr::AnalyticExpr;
using expr::Jet3;
using expr::NodeKind;
using oracles::Complex;

namespace {

void check_jet(const Jet3& j, Complex c0, Complex c1, Complex c2, Complex c3, double tol) {
  CHECK(std::abs(j.c0 - c0) <= tol);
  CHECK(std::abs(j.c1 - c1) <= tol);
  CHECK(std::abs(j.c2 - c2) <= tol);
  CHECK(std::abs(j.c3 - c3) <= tol);
}

}  // namespace

TEST_CASE("parse: identity and structural shapes") {
  AnalyticExpr e = expr::parse("z");
  CHECK(e.root().kind == NodeKind::Var);

  AnalyticExpr n = expr::parse("-(1-z)^2");
  REQUIRE(n.root().kind == NodeKind::Neg);
  const expr::Node& pw = *n.root().lhs;
  REQUIRE(pw.kind == NodeKind::PowInt);
  CHECK(pw.exponent == 2);
  const expr::Node& sb = *pw.lhs;
  REQUIRE(sb.kind == NodeKind::Sub);
  CHECK(sb.lhs->kind == NodeKind::Const);
  CHECK(sb.lhs->value == Complex(1.0, 0.0));
  CHECK(sb.rhs->kind == NodeKind::Var);
}

TEST_CASE("parse: the logarithmic self-map expression") {
  AnalyticExpr e = expr::parse("(2*z+(1-z)*log(2/(1-z)))/(2+(1-z)*log(2/(1-z)))");
  CHECK(e.root().kind == NodeKind::Div);
  // spot-check a value: F(0) = log(2)/(2 + log(2))
  Complex f0 = expr::eval(e, 0.0);
  double l2 = std::log(2.0);
  CHECK(std::abs(f0 - Complex(l2 / (2.0 + l2))) < 1e-15);
}

TEST_CASE("parse: precedence and associativity") {
  CHECK(expr::pretty_print(expr::parse("1+2*z")) == "1+2*z");
  CHECK(expr::pretty_print(expr::parse("(1+2)*z")) == "(1+2)*z");
  CHECK(expr::pretty_print(expr::parse("1-2-z")) == "1-2-z");
  CHECK(expr::pretty_print(expr::parse("1-(2-z)")) == "1-(2-z)");
  CHECK(expr::pretty_print(expr::parse("-z^2")) == "-z^2");  // ^ binds tighter than unary -
  CHECK(expr::pretty_print(expr::parse("2*-z")) == "2*-z");
  CHECK(expr::pretty_print(expr::parse("z^-2")) == "z^-2");
  CHECK(expr::pretty_print(expr::parse("exp(z)^2")) == "exp(z)^2");
  CHECK(structurally_equal(expr::parse("i*pi*z"), expr::parse("(i*pi)*z")));
}

TEST_CASE("parse: malformed inputs carry exact byte offsets") {
  struct Case {
    const char* text;
    std::size_t offset;
  };
  const Case cases[] = {
      {"", 0},        {"(1+", 3},     {"1+", 2},        {"z z", 2},      {"(1-z", 4},
      {"2*", 2},      {"^2", 0},      {"z^", 2},        {"z^z", 2},      {"z^1.5", 2},
      {"z^65", 2},    {"z^-65", 2},   {"log", 3},       {"log z", 4},    {"sin(z)", 0},
      {"2.5.3", 3},   {"1e", 2},      {"()", 1},        {"1 + * 2", 4},  {"z @ 2", 2},
      {"exp()", 4},   {"--z", 1},     {"1.e3", 2},      {"z^2^3", 3},
  };
  for (const Case& c : cases) {
    CAPTURE(c.text);
    try {
      expr::parse(c.text);
      FAIL_CHECK("expected ParseError for: " << c.text);
    } catch (const ParseError& e) {
      CHECK(e.offset() == c.offset);
      std::string msg = e.what();
      bool informative = msg.find("expect") != std::string::npos ||
                         msg.find("unexpected") != std::string::npos ||
                         msg.find("unknown") != std::string::npos ||
                         msg.find("range") != std::string::npos;
      CHECK(informative);
    }
  }
}

TEST_CASE("eval_jet: pinned examples") {
  check_jet(expr::eval_jet(expr::parse("z^2"), 1.0), 1.0, 2.0, 2.0, 0.0, 0.0);
  check_jet(expr::eval_jet(expr::parse("-(1-z)^2"), 1.0), 0.0, 0.0, -2.0, 0.0, 0.0);
  check_jet(expr::eval_jet(expr::parse("exp(z)"), 0.0), 1.0, 1.0, 1.0, 1.0, 0.0);
}

TEST_CASE("eval_jet: error paths") {
  CHECK_THROWS_AS((void)expr::eval_jet(expr::parse("1/z"), 0.0), Error);
  CHECK_THROWS_AS((void)expr::eval_jet(expr::parse("log(z)"), Complex(-0.5, 0.0)), Error);
  CHECK_THROWS_AS((void)expr::eval_jet(expr::parse("sqrt(z-1)"), Complex(0.5, 0.0)), Error);
  CHECK_THROWS_AS((void)expr::eval_jet(expr::parse("log(z)"), Complex(0.0, 0.0)), Error);
  CHECK_THROWS_AS((void)expr::eval_jet(expr::parse("exp(z^8)"), Complex(900.0, 0.0)), Error);

  try {
    (void)expr::eval_jet(expr::parse("1/(1-z)"), 1.0);
    FAIL_CHECK("expected DivisionByZero");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DivisionByZero);
  }
  try {
    (void)expr::eval_jet(expr::parse("log(1-z)"), 2.0);
    FAIL_CHECK("expected BranchCut");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BranchCut);
  }
}

TEST_CASE("eval_jet: polynomial jets match exact coefficient differentiation") {
  oracles::Rng rng(20240801);
  int checked = 0;
  while (checked < 200) {
    oracles::Poly p = oracles::random_poly(rng, 6);
    Complex z = rng.disk_point(0.9);
    AnalyticExpr e = p.to_expr();
    Jet3 j = expr::eval_jet(e, z);
    double scale = 0.0;
    for (int k = 0; k < 4; ++k) scale = std::max(scale, std::abs(p.deriv(z, k)));
    double tol = 1e-12 * std::max(1.0, scale);
    CHECK(std::abs(j.c0 - p.deriv(z, 0)) <= tol);
    CHECK(std::abs(j.c1 - p.deriv(z, 1)) <= tol);
    CHECK(std::abs(j.c2 - p.deriv(z, 2)) <= tol);
    CHECK(std::abs(j.c3 - p.deriv(z, 3)) <= tol);
    ++checked;
  }
}

TEST_CASE("eval_jet: every primitive against independent derivative oracles") {
  // Literal 4th-order stencils at step 1e-4 are sound in double precision for
  // c1 and c2; c3 uses the ring quadrature (and a wider stencil cross-check),
  // since /h^3 amplifies rounding noise past any useful tolerance at 1e-4.
  struct Probe {
    const char* text;
    Complex z;
  };
  const Probe probes[] = {
      {"exp(z)", {0.3, 0.2}},        {"log(z+2)", {0.4, 0.3}},   {"sqrt(z+2)", {0.1, -0.4}},
      {"1/(z-2)", {0.5, 0.1}},       {"z^5", {0.6, -0.2}},       {"z^-2", {0.7, 0.4}},
      {"(1-z)*exp(z)", {0.2, 0.2}},  {"z*(1+z^2)", {-0.3, 0.5}}, {"-(1-z)^2", {0.25, -0.5}},
      {"(z^2-1)/2", {0.45, 0.15}},   {"i*z+pi", {-0.2, -0.3}},   {"sqrt(exp(z)+2)", {0.3, 0.0}},
  };
  for (const Probe& pr : probes) {
    CAPTURE(pr.text);
    AnalyticExpr e = expr::parse(pr.text);
    auto f = [&](Complex w) { return expr::eval(e, w); };
    Jet3 j = expr::eval_jet(e, pr.z);

    const double h = 1e-4;
    CHECK(oracles::rel_err(j.c1, oracles::fd4_deriv1(f, pr.z, h)) < 1e-6);
    CHECK(oracles::rel_err(j.c2, oracles::fd4_deriv2(f, pr.z, h)) < 1e-6);
    CHECK(oracles::rel_err(j.c3, oracles::fd4_deriv3(f, pr.z, 0x1p-8)) < 1e-6);

    auto ring = oracles::contour_jet(f, pr.z, 0.15);
    CHECK(oracles::rel_err(j.c0, ring[0]) < 1e-9);
    CHECK(oracles::rel_err(j.c1, ring[1]) < 1e-9);
    CHECK(oracles::rel_err(j.c2, ring[2]) < 1e-8);
    CHECK(oracles::rel_err(j.c3, ring[3]) < 1e-7);
  }
}

TEST_CASE("pretty_print round-trips structurally") {
  oracles::Rng rng(777);
  for (int i = 0; i < 300; ++i) {
    AnalyticExpr e = oracles::random_expr(rng, rng.uniform_int(0, 5));
    std::string text = expr::pretty_print(e);
    CAPTURE(text);
    AnalyticExpr back = expr::parse(text);
    CHECK(expr::structurally_equal(e, back));
    CHECK(expr::pretty_print(back) == text);
  }
}

TEST_CASE("parse then pretty_print round-trips for source text") {
  const char* sources[] = {
      "z",
      "-(1-z)^2",
      "(2*z+(1-z)*log(2/(1-z)))/(2+(1-z)*log(2/(1-z)))",
      "z*(1+z^2)",
      "-(i/2)*(1-z)^2",
      "-i*pi*z",
      "(z^2-1)/2",
      "1e-3*z+2.5E+2",
      "sqrt(exp(z)+2)/log(3+z)",
  };
  for (const char* s : sources) {
    AnalyticExpr e = expr::parse(s);
    AnalyticExpr back = expr::parse(expr::pretty_print(e));
    CHECK(expr::structurally_equal(e, back));
  }
}

TEST_CASE("complex constant builder is canonical and exact") {
  oracles::Rng rng(4242);
  for (int i = 0; i < 50; ++i) {
    Complex c = rng.box_point(3.0);
    AnalyticExpr e = expr::constant(c);
    CHECK(expr::eval(e, 0.0) == c);
    CHECK(expr::structurally_equal(e, expr::parse(expr::pretty_print(e))));
  }
}

TEST_CASE("jet arithmetic is exact for polynomials (algebraic identities)") {
  // (p*q)' and friends via jets of p and q separately vs the product tree
  oracles::Rng rng(99);
  for (int i = 0; i < 50; ++i) {
    oracles::Poly p = oracles::random_poly(rng, 3);
    oracles::Poly q = oracles::random_poly(rng, 3);
    Complex z = rng.disk_point(0.8);
    Jet3 a = expr::eval_jet(p.to_expr(), z);
    Jet3 b = expr::eval_jet(q.to_expr(), z);
    Jet3 prod = expr::eval_jet(expr::mul(p.to_expr(), q.to_expr()), z);
    Jet3 manual = a * b;
    double scale = std::max({1.0, std::abs(prod.c0), std::abs(prod.c1), std::abs(prod.c2),
                             std::abs(prod.c3)});
    CHECK(std::abs(prod.c0 - manual.c0) <= 1e-13 * scale);
    CHECK(std::abs(prod.c1 - manual.c1) <= 1e-13 * scale);
    CHECK(std::abs(prod.c2 - manual.c2) <= 1e-13 * scale);
    CHECK(std::abs(prod.c3 - manual.c3) <= 1e-13 * scale);
  }
}
