#include "semiflow/families.hpp"

namespace semiflow::families {

const std::vector<Family>& registry() {
  static const std::vector<Family> entries = {
      {"linear", "z", Role::Generator,
       "linear dilation flow F_t(z) = e^{-t} z, interior fixed point 0", Complex(0, 0)},
      {"rotation_half_turn", "-i*pi*z", Role::Generator,
       "elliptic rotation group F_t(z) = e^{i pi t} z", Complex(0, 0)},
      {"hyperbolic_auto", "(z^2-1)/2", Role::Generator,
       "hyperbolic automorphism group fixing +1 and -1", Complex(1, 0)},
      {"parabolic_nonauto", "-(1-z)^2", Role::Generator,
       "parabolic nonautomorphic flow, half-plane shift w -> w + t", Complex(1, 0)},
      {"parabolic_auto", "-(i/2)*(1-z)^2", Role::Generator,
       "parabolic automorphism group, half-plane shift w -> w + i t", Complex(1, 0)},
      {"odd_cubic", "z*(1+z^2)", Role::Generator,
       "odd dilation-type flow commuting with the half-turn but not the quarter-turn",
       Complex(0, 0)},
      {"log_selfmap", "(2*z+(1-z)*log(2/(1-z)))/(2+(1-z)*log(2/(1-z)))", Role::SelfMap,
       "parabolic self-map whose second derivative has no boundary limit", Complex(1, 0)},
  };
  return entries;
}

const Family* find(const std::string& label) {
  for (const Family& f : registry())
    if (f.label == label) return &f;
  return nullptr;
}

flow::GeneratorSpec make_generator(const Family& fam) {
  if (fam.role != Role::Generator)
    throw Error(ErrorCode::InvalidParameter, "family '" + fam.label + "' is not a generator");
  return flow::GeneratorSpec::make(expr::parse(fam.expression), fam.dw, fam.label);
}

expr::AnalyticExpr make_expr(const Family& fam) { return expr::parse(fam.expression); }

}  // namespace semiflow::families
