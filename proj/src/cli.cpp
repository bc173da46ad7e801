#include "semiflow/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "semiflow/boundary.hpp"
#include "semiflow/commute.hpp"
#include "semiflow/families.hpp"
#include "semiflow/flow.hpp"
#include "semiflow/grids.hpp"
#include "semiflow/koenigs.hpp"
#include "semiflow/report.hpp"

namespace semiflow::cli {

namespace {

using Complex = std::complex<double>;
using nlohmann::json;

struct RunConfig {
  flow::IntegratorConfig integrator;
  std::map<std::string, std::string> generators;
  std::map<std::string, std::vector<Complex>> grids;
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

RunConfig load_config(const std::string& path) {
  RunConfig rc;
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidParameter, "cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidParameter, std::string("config is not valid JSON: ") + e.what());
  }
  if (j.contains("integrator")) {
    const json& it = j["integrator"];
    if (it.contains("rel_tol")) rc.integrator.rel_tol = it["rel_tol"].get<double>();
    if (it.contains("abs_tol")) rc.integrator.abs_tol = it["abs_tol"].get<double>();
    if (it.contains("h_init")) rc.integrator.h_init = it["h_init"].get<double>();
    if (it.contains("h_min")) rc.integrator.h_min = it["h_min"].get<double>();
    if (it.contains("max_steps")) rc.integrator.max_steps = it["max_steps"].get<long>();
  }
  if (j.contains("generators")) {
    for (auto& [label, text] : j["generators"].items()) {
      std::string expr_text = text.get<std::string>();
      (void)expr::parse(expr_text);  // all expressions must parse
      rc.generators[label] = expr_text;
    }
  }
  if (j.contains("grids")) {
    for (auto& [name, pts] : j["grids"].items()) {
      std::vector<Complex> grid;
      for (const json& p : pts) {
        Complex z(p.at(0).get<double>(), p.at(1).get<double>());
        if (!(std::abs(z) < 1.0))
          throw Error(ErrorCode::InvalidParameter,
                      "config grid '" + name + "' has a point outside the open disk");
        grid.push_back(z);
      }
      rc.grids[name] = std::move(grid);
    }
  }
  return rc;
}

// Resolution order for -f/-g values: config label, bundled family label,
// literal expression.
std::string resolve_expression_text(const std::string& text, const RunConfig& rc) {
  if (auto it = rc.generators.find(text); it != rc.generators.end()) return it->second;
  if (const families::Family* fam = families::find(text)) return fam->expression;
  return text;
}

flow::GeneratorSpec resolve_generator(const std::string& text, const RunConfig& rc) {
  if (rc.generators.count(text) == 0) {
    if (const families::Family* fam = families::find(text)) return families::make_generator(*fam);
  }
  return flow::GeneratorSpec::make(expr::parse(resolve_expression_text(text, rc)), {}, text);
}

bool contains_var(const expr::Node& n) {
  if (n.kind == expr::NodeKind::Var) return true;
  if (n.lhs && contains_var(*n.lhs)) return true;
  if (n.rhs && contains_var(*n.rhs)) return true;
  return false;
}

Complex parse_complex(const std::string& text) {
  expr::AnalyticExpr e = expr::parse(text);
  if (contains_var(e.root()))
    throw Error(ErrorCode::InvalidParameter, "expected a constant, got an expression in z");
  return expr::eval(e, 0.0);
}

std::vector<Complex> resolve_grid(const std::string& name, const RunConfig& rc) {
  if (auto it = rc.grids.find(name); it != rc.grids.end()) return it->second;
  if (name == "default") return commute::default_grid();
  if (name == "c16") return grids::ring_pair(16, 0.25, 0.55);
  if (name == "ring10") return grids::ring(10, 0.5);
  throw Error(ErrorCode::InvalidParameter, "unknown grid '" + name + "'");
}

json report_envelope(const std::string& command, json inputs, json outputs, json diagnostics) {
  return json{{"command", command},
              {"schema_version", report::kSchemaVersion},
              {"inputs", std::move(inputs)},
              {"outputs", std::move(outputs)},
              {"diagnostics", std::move(diagnostics)}};
}

void write_csv(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidParameter, "cannot open csv path '" + path + "'");
  out << content;
}

json dw_to_json(const boundary::DwClassification& dw) {
  json diag{{"warnings", json::array()}};
  diag["orbit_separation"] =
      std::isfinite(dw.diagnostics.orbit_separation) ? json(dw.diagnostics.orbit_separation) : json();
  diag["residuals"] = dw.diagnostics.residuals;
  return json{{"kind", boundary::dw_kind_name(dw.kind)},
              {"tau", report::to_json(dw.tau)},
              {"beta", report::to_json(dw.beta)},
              {"alpha", report::to_json(dw.alpha)},
              {"gamma", report::to_json(dw.gamma)},
              {"diagnostics", std::move(diag)}};
}

int run_inner(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unit-disk holomorphic semigroup toolkit"};
  app.require_subcommand(1);

  std::string config_path, csv_path;
  double rel_tol = 0, abs_tol = 0, h_init = 0, h_min = 0;
  long max_steps = 0;
  app.add_option("--config", config_path, "JSON config file (flags win on conflict)");
  CLI::Option* o_csv = app.add_option("--csv", csv_path, "write orbit/grid data as CSV");
  CLI::Option* o_rel = app.add_option("--rel-tol", rel_tol, "integrator relative tolerance");
  CLI::Option* o_abs = app.add_option("--abs-tol", abs_tol, "integrator absolute tolerance");
  CLI::Option* o_hi = app.add_option("--h-init", h_init, "initial step size");
  CLI::Option* o_hm = app.add_option("--h-min", h_min, "minimum step size");
  CLI::Option* o_ms = app.add_option("--max-steps", max_steps, "step budget per unit time");

  std::string f_text, g_text, z_text, tau_text, kind_text = "auto", grid_name = "default";
  double t_arg = 1.0, phi_arg = 0.0;
  int order_arg = 0, n_arg = 10, k_arg = 3, nmax_arg = 10000;

  CLI::App* c_parse = app.add_subcommand("parse-check", "parse an expression and echo its canonical form");
  c_parse->add_option("expr", f_text, "expression text")->required();

  CLI::App* c_classify = app.add_subcommand("classify", "locate and classify the Denjoy-Wolff point");
  c_classify->add_option("-f", f_text, "generator expression or label")->required();

  CLI::App* c_flow = app.add_subcommand("flow", "evaluate F_t(z) and its z-derivatives");
  c_flow->add_option("-f", f_text)->required();
  c_flow->add_option("-z", z_text)->required();
  c_flow->add_option("-t", t_arg)->required();
  c_flow->add_option("--order", order_arg)->check(CLI::Range(0, 3));

  CLI::App* c_orbit = app.add_subcommand("orbit", "iterate the time-one map");
  c_orbit->add_option("-f", f_text)->required();
  c_orbit->add_option("-z", z_text)->required();
  c_orbit->add_option("-n", n_arg)->required()->check(CLI::Range(1, 1000000));

  CLI::App* c_derivs = app.add_subcommand("derivs", "closed-form vs measured boundary derivative of F_t");
  c_derivs->add_option("-f", f_text)->required();
  c_derivs->add_option("-t", t_arg)->required();
  c_derivs->add_option("--order", order_arg)->required()->check(CLI::Range(1, 3));

  CLI::App* c_taylor = app.add_subcommand("taylor", "boundary Taylor coefficients and remainder decay");
  c_taylor->add_option("-f", f_text)->required();
  c_taylor->add_option("--tau", tau_text)->required();
  c_taylor->add_option("-k", k_arg)->check(CLI::Range(0, 3));

  CLI::App* c_koenigs = app.add_subcommand("koenigs", "construct the intertwining function");
  c_koenigs->add_option("-f", f_text)->required();
  c_koenigs->add_option("--kind", kind_text)->check(CLI::IsMember({"auto", "schroeder", "abel"}));
  c_koenigs->add_option("--n-max", nmax_arg)->check(CLI::Range(8, 100000));

  CLI::App* c_commute = app.add_subcommand("commute", "commutation residual of two flows");
  c_commute->add_option("-f", f_text)->required();
  c_commute->add_option("-g", g_text)->required();
  c_commute->add_option("--grid", grid_name);

  CLI::App* c_equiv = app.add_subcommand("equivariance", "rotation equivariance residual of a flow");
  c_equiv->add_option("-g", g_text)->required();
  c_equiv->add_option("--phi", phi_arg)->required();
  c_equiv->add_option("-t", t_arg)->required();

  CLI::App* c_examples = app.add_subcommand("examples", "list the bundled families");

  // global flags (--csv, --rel-tol, ...) are accepted after the subcommand too
  for (CLI::App* sub : {c_parse, c_classify, c_flow, c_orbit, c_derivs, c_taylor, c_koenigs,
                        c_commute, c_equiv, c_examples})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << report::dump(nlohmann::json{{"error", {{"code", "Usage"}, {"message", e.what()}}}});
    return 1;
  }

  RunConfig rc;
  if (!config_path.empty()) rc = load_config(config_path);
  if (o_rel->count()) rc.integrator.rel_tol = rel_tol;
  if (o_abs->count()) rc.integrator.abs_tol = abs_tol;
  if (o_hi->count()) rc.integrator.h_init = h_init;
  if (o_hm->count()) rc.integrator.h_min = h_min;
  if (o_ms->count()) rc.integrator.max_steps = max_steps;
  flow::validate(rc.integrator);
  const flow::IntegratorConfig& icfg = rc.integrator;

  json integ{{"rel_tol", icfg.rel_tol},
             {"abs_tol", icfg.abs_tol},
             {"h_init", icfg.h_init},
             {"h_min", icfg.h_min},
             {"max_steps", icfg.max_steps}};

  json rep;
  if (*c_parse) {
    expr::AnalyticExpr e = expr::parse(f_text);
    rep = report_envelope("parse-check", json{{"expr", f_text}},
                          json{{"pretty", expr::pretty_print(e)},
                               {"node_count", static_cast<long long>(expr::node_count(e))},
                               {"ok", true}},
                          json{{"warnings", json::array()}});
  } else if (*c_classify) {
    flow::GeneratorSpec g = resolve_generator(f_text, rc);
    boundary::DwClassification dw = boundary::dw_point(g, icfg);
    json o = dw_to_json(dw);
    json diag = o["diagnostics"];
    o.erase("diagnostics");
    rep = report_envelope("classify",
                          json{{"f", f_text}, {"resolved", expr::pretty_print(g.f)}, {"integrator", integ}},
                          std::move(o), std::move(diag));
  } else if (*c_flow) {
    flow::GeneratorSpec g = resolve_generator(f_text, rc);
    Complex z = parse_complex(z_text);
    flow::FlowJet fj = flow::evolve(g, z, t_arg, order_arg, icfg);
    json o{{"u", report::to_json(fj.u)},
           {"steps_accepted", fj.steps_accepted},
           {"steps_rejected", fj.steps_rejected}};
    if (order_arg >= 1) o["u1"] = report::to_json(fj.u1);
    if (order_arg >= 2) o["u2"] = report::to_json(fj.u2);
    if (order_arg >= 3) o["u3"] = report::to_json(fj.u3);
    rep = report_envelope("flow",
                          json{{"f", f_text},
                               {"z", report::to_json(z)},
                               {"t", t_arg},
                               {"order", order_arg},
                               {"integrator", integ}},
                          std::move(o), json{{"warnings", json::array()}});
  } else if (*c_orbit) {
    flow::GeneratorSpec g = resolve_generator(f_text, rc);
    Complex z = parse_complex(z_text);
    std::vector<Complex> orbit = flow::iterate(g, z, n_arg, icfg);
    json pts = json::array(), steps = json::array();
    std::string csv = "n,re,im,poincare_step\n";
    Complex prev = z;
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      double step = boundary::poincare_distance(prev, orbit[i]);
      pts.push_back(report::to_json(orbit[i]));
      steps.push_back(step);
      csv += std::to_string(i + 1) + "," + fmt17(orbit[i].real()) + "," + fmt17(orbit[i].imag()) +
             "," + fmt17(step) + "\n";
      prev = orbit[i];
    }
    if (o_csv->count()) write_csv(csv_path, csv);
    rep = report_envelope("orbit",
                          json{{"f", f_text}, {"z", report::to_json(z)}, {"n", n_arg}, {"integrator", integ}},
                          json{{"points", std::move(pts)}, {"poincare_steps", std::move(steps)}},
                          json{{"warnings", json::array()}});
  } else if (*c_derivs) {
    flow::GeneratorSpec g = resolve_generator(f_text, rc);
    boundary::DerivativeCheck chk = boundary::verify_dw_flow_derivative(g, t_arg, order_arg, icfg);
    rep = report_envelope("derivs",
                          json{{"f", f_text}, {"t", t_arg}, {"order", order_arg}, {"integrator", integ}},
                          json{{"predicted", report::to_json(chk.predicted)},
                               {"measured", report::to_json(chk.measured)},
                               {"residual", chk.residual},
                               {"measured_error", chk.measured_error}},
                          json{{"warnings", json::array()}});
  } else if (*c_taylor) {
    std::string resolved = resolve_expression_text(f_text, rc);
    expr::AnalyticExpr e = expr::parse(resolved);
    Complex tau = parse_complex(tau_text);
    boundary::BoundaryTaylor bt = boundary::boundary_taylor(e, tau, k_arg);
    json coeffs = json::array(), decay = json::array();
    std::string csv = "r,ratio\n";
    for (Complex c : bt.coeffs) coeffs.push_back(report::to_json(c));
    for (auto [r, ratio] : bt.remainder_decay) {
      decay.push_back(json{{"r", r}, {"ratio", ratio}});
      csv += fmt17(r) + "," + fmt17(ratio) + "\n";
    }
    if (o_csv->count()) write_csv(csv_path, csv);
    rep = report_envelope("taylor",
                          json{{"f", f_text}, {"tau", report::to_json(bt.tau)}, {"k", k_arg}},
                          json{{"coeffs", std::move(coeffs)}, {"remainder_decay", std::move(decay)}},
                          json{{"warnings", json::array()}});
  } else if (*c_koenigs) {
    flow::GeneratorSpec g = resolve_generator(f_text, rc);
    koenigs::KoenigsModel model = [&] {
      if (kind_text == "abel") return koenigs::abel_parabolic(g, icfg, nmax_arg);
      if (kind_text == "schroeder") {
        boundary::DwClassification dw = boundary::dw_point(g, icfg);
        return dw.kind == boundary::DwKind::Dilation ? koenigs::schroeder_interior(g, icfg)
                                                     : koenigs::schroeder_hyperbolic(g, icfg);
      }
      boundary::DwClassification dw = boundary::dw_point(g, icfg);
      switch (dw.kind) {
        case boundary::DwKind::Dilation: return koenigs::schroeder_interior(g, icfg);
        case boundary::DwKind::Hyperbolic: return koenigs::schroeder_hyperbolic(g, icfg);
        case boundary::DwKind::ParabolicAutomorphic:
        case boundary::DwKind::ParabolicNonautomorphic:
          return koenigs::abel_parabolic(g, icfg, nmax_arg);
        default:
          throw Error(ErrorCode::NotDilation,
                      "elliptic automorphism groups have no Koenigs model here");
      }
    }();

    const std::vector<Complex> sample{{0.3, 0.0}, {-0.25, 0.2}, {0.0, 0.45}, {-0.4, 0.0}, {0.2, -0.3}};
    json samples = json::array();
    double worst = 0.0;
    for (Complex z : sample) {
      Complex hz = model.eval(z);
      Complex hfz = model.eval(flow::map_at(g, z, 1.0, icfg));
      double r = model.kind() == koenigs::ModelKind::Abel
                     ? std::abs(hfz - hz - 1.0)
                     : std::abs(hfz - *model.multiplier() * hz);
      worst = std::max(worst, r);
      samples.push_back(json{{"z", report::to_json(z)}, {"value", report::to_json(hz)}});
    }
    json o{{"kind", koenigs::model_kind_name(model.kind())},
           {"tau", report::to_json(model.tau())},
           {"n_used", model.n_used()},
           {"convergence_estimate", model.convergence_estimate()},
           {"functional_residual", worst},
           {"samples", std::move(samples)}};
    o["multiplier"] = model.multiplier() ? report::to_json(*model.multiplier()) : json();
    rep = report_envelope("koenigs",
                          json{{"f", f_text}, {"kind", kind_text}, {"integrator", integ}},
                          std::move(o), json{{"warnings", json::array()}});
  } else if (*c_commute) {
    flow::GeneratorSpec gF = resolve_generator(f_text, rc);
    flow::GeneratorSpec gG = resolve_generator(g_text, rc);
    std::vector<Complex> grid = resolve_grid(grid_name, rc);
    auto ts = commute::default_times();
    commute::CommuteReport cr = commute::commute_residual(gF, gG, ts, grid, icfg);
    json pairs = json::array();
    std::string csv = "t,s,residual\n";
    for (const auto& p : cr.per_pair) {
      pairs.push_back(json{{"t", p.t}, {"s", p.s}, {"residual", p.residual}});
      csv += fmt17(p.t) + "," + fmt17(p.s) + "," + fmt17(p.residual) + "\n";
    }
    if (o_csv->count()) write_csv(csv_path, csv);
    rep = report_envelope(
        "commute",
        json{{"f", f_text}, {"g", g_text}, {"grid", grid_name}, {"integrator", integ}},
        json{{"max_residual", cr.max_residual},
             {"argmax", json{{"t", cr.argmax_t}, {"s", cr.argmax_s}, {"z", report::to_json(cr.argmax_z)}}},
             {"grid_spec", cr.grid_spec},
             {"per_pair", std::move(pairs)}},
        json{{"warnings", json::array()}});
  } else if (*c_equiv) {
    flow::GeneratorSpec gG = resolve_generator(g_text, rc);
    std::vector<Complex> grid = resolve_grid(grid_name, rc);
    double r = commute::rotation_equivariance(gG, phi_arg, t_arg, grid, icfg);
    rep = report_envelope("equivariance",
                          json{{"g", g_text}, {"phi", phi_arg}, {"t", t_arg}, {"integrator", integ}},
                          json{{"residual", r}}, json{{"warnings", json::array()}});
  } else if (*c_examples) {
    json fams = json::array();
    for (const families::Family& f : families::registry()) {
      fams.push_back(json{{"label", f.label},
                          {"expression", f.expression},
                          {"role", f.role == families::Role::Generator ? "generator" : "self_map"},
                          {"description", f.description}});
    }
    rep = report_envelope("examples", json::object(), json{{"families", std::move(fams)}},
                          json{{"warnings", json::array()}});
  }

  out << report::dump(rep);
  (void)err;
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    return run_inner(argc, argv, out, err);
  } catch (const ParseError& e) {
    err << report::dump(report::error_json(e));
    return 2;
  } catch (const Error& e) {
    err << report::dump(report::error_json(e));
    return e.code() == ErrorCode::InvalidParameter ? 1 : 3;
  } catch (const std::exception& e) {
    err << report::dump(nlohmann::json{
        {"error", {{"code", "Internal"}, {"message", e.what()}}}});
    return 3;
  }
}

}  // namespace semiflow::cli
