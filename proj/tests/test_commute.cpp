#include <doctest.h>

#include <numbers>

#include "semiflow/boundary.hpp"
#include "semiflow/commute.hpp"
#include "semiflow/families.hpp"
#include "semiflow/grids.hpp"
#include "support/oracles.hpp"

using namespace semiflow;
using flow::GeneratorSpec;
using oracles::Complex;

namespace {

GeneratorSpec gen(const char* text) { return GeneratorSpec::parse(text); }

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("commute_residual: proportional linear and parabolic flows commute") {
  const std::pair<double, double> ts1[] = {{1.0, 1.0}, {0.5, 2.0}};
  auto grid = grids::ring(10, 0.5);
  commute::CommuteReport r1 = commute::commute_residual(gen("z"), gen("2*z"), ts1, grid);
  CHECK(r1.max_residual < 1e-9);

  auto ts = commute::default_times();
  commute::CommuteReport r2 =
      commute::commute_residual(gen("-(1-z)^2"), gen("-2*(1-z)^2"), ts, commute::default_grid());
  CHECK(r2.max_residual < 1e-8);
}

TEST_CASE("commute_residual: rotation element commutes, the group does not") {
  GeneratorSpec rot = gen("-i*pi*z");
  GeneratorSpec cubic = gen("z*(1+z^2)");
  const std::pair<double, double> ts[] = {{1.0, 1.0}, {0.5, 1.0}, {2.0, 0.5}};
  commute::CommuteReport r = commute::commute_residual(rot, cubic, ts, commute::default_grid());
  REQUIRE(r.per_pair.size() == 3);
  CHECK(r.per_pair[0].residual < 1e-8);  // integer rotation time
  CHECK(r.per_pair[1].residual > 1e-3);  // quarter turn
  CHECK(r.per_pair[2].residual < 1e-8);  // integer rotation time again
  CHECK(r.max_residual == r.per_pair[1].residual);
  CHECK(r.argmax_t == 0.5);
}

TEST_CASE("proportionality: exact multiples and a non-multiple") {
  auto sample = grids::ring_pair(12, 0.3, 0.6);
  commute::ProportionalityReport p1 = commute::proportionality(gen("z"), gen("2*z"), sample);
  CHECK(std::abs(p1.a - Complex(0.5)) < 1e-14);
  CHECK(p1.residual < 1e-12);

  commute::ProportionalityReport p2 =
      commute::proportionality(gen("-(1-z)^2"), gen("-3*(1-z)^2"), sample);
  CHECK(std::abs(p2.a - Complex(1.0 / 3.0)) < 1e-14);
  CHECK(p2.residual < 1e-12);

  commute::ProportionalityReport p3 = commute::proportionality(gen("z"), gen("z^2"), sample);
  CHECK(p3.residual > 0.1);
}

TEST_CASE("proportionality: degenerate and undersized samples") {
  std::vector<Complex> tiny = grids::ring(4, 0.5);
  CHECK_THROWS_AS((void)commute::proportionality(gen("z"), gen("2*z"), tiny), Error);

  // g = z^8 nearly vanishes on a small circle relative to its peak on the
  // larger one, so more than half the sample counts as zero
  std::vector<Complex> mixed = grids::ring(7, 1e-3);
  for (Complex z : grids::ring(5, 0.9)) mixed.push_back(z);
  try {
    (void)commute::proportionality(gen("z"), gen("z^8"), mixed);
    FAIL_CHECK("expected DegenerateSample");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateSample);
  }
}

TEST_CASE("mobius: pinned values and involution") {
  CHECK(std::abs(commute::mobius(0.0, 0.3) - Complex(-0.3)) < 1e-16);
  CHECK(std::abs(commute::mobius(0.5, 0.5)) < 1e-16);
  CHECK(std::abs(commute::mobius(0.5, 0.0) - Complex(0.5)) < 1e-16);

  oracles::Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    Complex tau = rng.disk_point(0.85);
    Complex z = rng.disk_point(0.95);
    CHECK(std::abs(commute::mobius(tau, commute::mobius(tau, z)) - z) < 1e-12);
  }

  CHECK_THROWS_AS((void)commute::mobius(Complex(1.1, 0.0), 0.0), Error);
  CHECK_THROWS_AS((void)commute::mobius(0.0, Complex(1.5, 0.0)), Error);
}

TEST_CASE("elliptic_group: pinned rotations and the group law") {
  CHECK(std::abs(commute::elliptic_group(0.0, kPi, 1.0)(0.4) - Complex(-0.4)) < 1e-15);
  CHECK(std::abs(commute::elliptic_group(0.0, 2.0 * kPi, 1.0)(Complex(0.3, 0.2)) -
                 Complex(0.3, 0.2)) < 1e-15);
  // phi * t = 2 pi: identity at any center
  CHECK(std::abs(commute::elliptic_group(0.3, kPi / 2.0, 4.0)(0.1) - Complex(0.1)) < 1e-14);

  oracles::Rng rng(17);
  for (int i = 0; i < 50; ++i) {
    Complex tau = rng.disk_point(0.8);
    double phi = rng.uniform(-3.0, 3.0);
    double t = rng.uniform(0.0, 2.0);
    double s = rng.uniform(0.0, 2.0);
    Complex z = rng.disk_point(0.9);
    Complex a = commute::elliptic_group(tau, phi, t)(commute::elliptic_group(tau, phi, s)(z));
    Complex b = commute::elliptic_group(tau, phi, t + s)(z);
    CHECK(std::abs(a - b) < 1e-12);
  }
}

TEST_CASE("lft_semigroup: pinned values, parameter validity, group law") {
  CHECK(std::abs(commute::lft_semigroup(0.0, 1.0, 1.0)(0.5) - Complex(0.5 * std::exp(-1.0))) <
        1e-16);
  // a = i gives a rotation group: modulus is preserved
  for (double t : {0.3, 1.7}) {
    Complex w = commute::lft_semigroup(0.0, Complex(0.0, 1.0), t)(Complex(0.3, 0.4));
    CHECK(std::abs(std::abs(w) - 0.5) < 1e-15);
  }
  CHECK(std::abs(commute::lft_semigroup(0.5, 1.0, 1.0)(0.5) - Complex(0.5)) < 1e-15);

  CHECK_THROWS_AS((void)commute::lft_semigroup(0.0, Complex(-0.1, 0.0), 1.0), Error);

  oracles::Rng rng(19);
  for (int i = 0; i < 50; ++i) {
    Complex tau = rng.disk_point(0.8);
    Complex a(rng.uniform(0.0, 2.0), rng.uniform(-2.0, 2.0));
    double t = rng.uniform(0.0, 2.0), s = rng.uniform(0.0, 2.0);
    Complex z = rng.disk_point(0.9);
    Complex lhs = commute::lft_semigroup(tau, a, t)(commute::lft_semigroup(tau, a, s)(z));
    Complex rhs = commute::lft_semigroup(tau, a, t + s)(z);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("hyperbolic_auto_generator: matches the two-fixed-point factored form") {
  GeneratorSpec g1 = commute::hyperbolic_auto_generator(1.0, -1.0, 1.0);
  GeneratorSpec g2 = commute::hyperbolic_auto_generator(1.0, -1.0, 2.0);
  expr::AnalyticExpr ref1 = expr::parse("(z^2-1)/2");
  expr::AnalyticExpr ref2 = expr::parse("z^2-1");
  oracles::Rng rng(23);
  for (int i = 0; i < 20; ++i) {
    Complex z = rng.disk_point(0.9);
    CHECK(std::abs(expr::eval(g1.f, z) - expr::eval(ref1, z)) < 1e-15);
    CHECK(std::abs(expr::eval(g2.f, z) - expr::eval(ref2, z)) < 1e-15);
  }
  CHECK(expr::eval(g1.f, 1.0) == Complex(0.0));
  CHECK(expr::eval(g1.f, -1.0) == Complex(0.0));

  Complex tau = std::polar(1.0, 0.7);
  Complex sig = std::polar(1.0, -2.1);
  GeneratorSpec g3 = commute::hyperbolic_auto_generator(tau, sig, 0.8);
  CHECK(std::abs(expr::eval(g3.f, tau)) < 1e-16);
  CHECK(std::abs(expr::eval(g3.f, sig)) < 1e-16);

  CHECK_THROWS_AS((void)commute::hyperbolic_auto_generator(0.5, -1.0, 1.0), Error);
  CHECK_THROWS_AS((void)commute::hyperbolic_auto_generator(1.0, -1.0, -1.0), Error);
}

TEST_CASE("rotation_equivariance: half-turn symmetry of the odd cubic") {
  GeneratorSpec g = gen("z*(1+z^2)");
  auto grid = commute::default_grid();
  CHECK(commute::rotation_equivariance(g, kPi, 1.0, grid) < 1e-8);
  CHECK(commute::rotation_equivariance(g, kPi / 2.0, 1.0, grid) > 1e-3);
  CHECK(commute::rotation_equivariance(gen("z"), 1.234, 1.0, grid) < 1e-12);
}

TEST_CASE("third-root symmetry: element commutes, group does not") {
  // F_t = e^{i 2pi t/3} z against the flow of z(1+z^3): the generator is
  // equivariant exactly under third-turns, so integer times commute and
  // fractional ones do not
  GeneratorSpec rot3 = gen("-i*2*pi/3*z");
  GeneratorSpec g3 = gen("z*(1+z^3)");
  auto grid = commute::default_grid();

  CHECK(commute::rotation_equivariance(g3, 2.0 * kPi / 3.0, 1.0, grid) < 1e-8);
  CHECK(commute::rotation_equivariance(g3, 2.0 * kPi / 5.0, 1.0, grid) > 1e-3);

  const std::pair<double, double> ts[] = {{1.0, 1.0}, {2.0, 0.5}, {0.5, 1.0}};
  commute::CommuteReport r = commute::commute_residual(rot3, g3, ts, grid);
  CHECK(r.per_pair[0].residual < 1e-8);
  CHECK(r.per_pair[1].residual < 1e-8);
  CHECK(r.per_pair[2].residual > 1e-3);
}

TEST_CASE("proportional generators commute across bundled families") {
  auto ts = commute::default_times();
  auto grid = commute::default_grid();
  for (const char* text : {"z", "-(1-z)^2", "z*(1+z^2)"}) {
    CAPTURE(text);
    GeneratorSpec f = gen(text);
    for (double a : {0.5, 2.0, 3.0}) {
      GeneratorSpec af = flow::GeneratorSpec::make(
          expr::mul(expr::constant(a), expr::parse(text)), {}, "scaled");
      commute::CommuteReport r = commute::commute_residual(f, af, ts, grid);
      CHECK(r.max_residual < 1e-8);
    }
  }
}

TEST_CASE("elliptic group elements commute with same-center LFT elements") {
  oracles::Rng rng(404);
  for (int i = 0; i < 40; ++i) {
    Complex tau = rng.disk_point(0.75);
    double phi = rng.uniform(-3.0, 3.0);
    Complex a(rng.uniform(0.0, 1.5), rng.uniform(-1.5, 1.5));
    double t = rng.uniform(0.0, 2.0), s = rng.uniform(0.0, 2.0);
    Complex z = rng.disk_point(0.9);
    auto F = commute::elliptic_group(tau, phi, t);
    auto G = commute::lft_semigroup(tau, a, s);
    CHECK(std::abs(F(G(z)) - G(F(z))) < 1e-12);
  }
}

TEST_CASE("the two parabolic translation groups commute as flows") {
  auto ts = commute::default_times();
  commute::CommuteReport r = commute::commute_residual(
      gen("-(i/2)*(1-z)^2"), gen("-i*(1-z)^2"), ts, commute::default_grid());
  CHECK(r.max_residual < 1e-8);
}

TEST_CASE("commuting non-elliptic pairs share their boundary type") {
  // hyperbolic and parabolic proportional pairs: residual certifies
  // commutation, then the classification kinds and the time-one boundary
  // derivatives must agree on the hyperbolic/parabolic axis
  auto ts = commute::default_times();
  auto grid = commute::default_grid();

  GeneratorSpec hf = gen("(z^2-1)/2");
  GeneratorSpec hg = gen("(z^2-1)/4");
  CHECK(commute::commute_residual(hf, hg, ts, grid).max_residual < 1e-8);
  boundary::DwClassification cf = boundary::dw_point(hf);
  boundary::DwClassification cg = boundary::dw_point(hg);
  CHECK(cf.kind == boundary::DwKind::Hyperbolic);
  CHECK(cg.kind == boundary::DwKind::Hyperbolic);
  double df = std::abs(boundary::verify_dw_flow_derivative(hf, 1.0, 1).measured);
  double dg = std::abs(boundary::verify_dw_flow_derivative(hg, 1.0, 1).measured);
  CHECK(df < 1.0 - 1e-4);
  CHECK(dg < 1.0 - 1e-4);

  GeneratorSpec pf = gen("-(1-z)^2");
  GeneratorSpec pg = gen("-3*(1-z)^2");
  CHECK(commute::commute_residual(pf, pg, ts, grid).max_residual < 1e-8);
  boundary::DwClassification cpf = boundary::dw_point(pf);
  boundary::DwClassification cpg = boundary::dw_point(pg);
  CHECK(cpf.kind == boundary::DwKind::ParabolicNonautomorphic);
  CHECK(cpg.kind == boundary::DwKind::ParabolicNonautomorphic);
  double dpf = std::abs(boundary::verify_dw_flow_derivative(pf, 1.0, 1).measured);
  double dpg = std::abs(boundary::verify_dw_flow_derivative(pg, 1.0, 1).measured);
  CHECK(std::abs(dpf - 1.0) < 1e-4);
  CHECK(std::abs(dpg - 1.0) < 1e-4);

  // a non-commuting cross-type pair is detected by the residual
  CHECK(commute::commute_residual(hf, pf, ts, grid).max_residual > 1e-3);
}
