#include "cli.hpp"

#include "helicoid/acceptance.hpp"
#include "helicoid/errors.hpp"
#include "helicoid/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

namespace helicoid::cli {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("path", "cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("path", "cannot write " + path);
  return out;
}

// Writes {payload, metadata} to `path`, or the payload to `out` when no path.
void emit(const std::string& path, const Json& payload, Json metadata, std::ostream& out) {
  if (path.empty()) {
    out << payload.dump(2) << '\n';
    return;
  }
  write_json(path, wrap_report(payload, stamped_metadata(std::move(metadata))));
}

Json command_metadata(const std::vector<std::string>& args) {
  Json a = Json::array();
  for (const auto& s : args) a.push_back(s);
  return Json{{"argv", a}};
}

Complex parse_point(const std::string& text) {
  std::stringstream ss(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(ss >> re) || ((ss >> comma) && (comma != ',' || !(ss >> im))))
    throw ValidationError("puncture", "expected 'inf', 're' or 're,im', got '" + text + "'");
  return {re, im};
}

struct Common {
  std::string report;
  bool h_fraction = false;
};

// Each run_* is a subcommand body returning an exit code.

struct SolveOpts {
  std::optional<std::string> h, A, Rout, nr, ntheta, spacing, inner, outer, tol, max_iters, max_halvings;
  std::string out;
};

int run_solve(const SolveOpts& o, const Common& c, const std::vector<std::string>& args, std::ostream& out) {
  std::vector<std::pair<std::string, std::string>> entries;
  auto put = [&](const char* key, const std::optional<std::string>& v) {
    if (v) entries.emplace_back(key, *v);
  };
  if (o.h) {
    std::string h = *o.h;
    if (c.h_fraction) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", std::stod(h) * std::numbers::pi);
      h = buf;
    }
    entries.emplace_back("h", h);
  }
  put("A", o.A);
  put("R_out", o.Rout);
  put("n_r", o.nr);
  put("n_theta", o.ntheta);
  put("spacing", o.spacing);
  put("inner_bc", o.inner);
  put("outer_bc", o.outer);
  put("tol", o.tol);
  put("max_iters", o.max_iters);
  put("damping_max_halvings", o.max_halvings);
  const SolveProblem problem = make_solve_problem(entries);
  const SolveReport rep = newton_solve(problem.grid, problem.data, problem.config);
  if (!o.out.empty()) {
    auto f = open_out(o.out);
    write_field_csv(f, rep.field);
  }
  const auto& g = problem.grid;
  Json payload{{"problem",
                {{"A", fixed(g.inner_radius())},
                 {"R_out", fixed(g.outer_radius())},
                 {"h", fixed(g.half_angle())},
                 {"n_r", g.n_r()},
                 {"n_theta", g.n_theta()},
                 {"spacing", g.spacing() == RadialSpacing::geometric ? "geometric" : "uniform"},
                 {"inner_bc", problem.inner_spec},
                 {"outer_bc", problem.outer_spec}}}};
  const Json solved = to_json(rep);
  for (const auto& [k, v] : solved.items()) payload[k] = v;
  emit(c.report, payload, command_metadata(args), out);
  // without --report stdout carries only the JSON payload
  if (!c.report.empty()) {
    out << "solve: " << rep.iterations << " Newton steps, residual "
        << (rep.residuals.empty() ? 0.0 : rep.residuals.back()) << (rep.converged ? ", converged\n" : ", NOT converged\n");
  }
  return rep.converged ? kOk : kCheckFailed;
}

struct DecayOpts {
  std::string field;
  std::vector<double> window;
  double beta = 0.9;
  std::vector<double> expect;
  bool raw = false;
};

int run_decay(const DecayOpts& o, const Common& c, const std::vector<std::string>& args, std::ostream& out) {
  auto in = open_in(o.field);
  const ScalarField u = read_field_csv(in);
  const ScalarField w = o.raw ? u : helicoid_deviation(u);
  const DecayFit fit = fit_decay_exponent(sup_profile(w), o.window[0], o.window[1]);
  const auto deriv = derivative_decay_check(w, o.beta, o.window[0], o.window[1]);
  const bool in_bracket = o.expect.empty() || (fit.beta_hat >= o.expect[0] && fit.beta_hat <= o.expect[1]);
  Json payload = to_json(fit, in_bracket);
  payload["derivative_beta"] = fixed(o.beta);
  payload["derivatives"] = to_json(deriv);
  const bool pass = in_bracket && deriv.pass();
  payload["pass"] = pass;
  emit(c.report, payload, command_metadata(args), out);
  return pass ? kOk : kCheckFailed;
}

struct CurvatureOpts {
  double r = 1.0;
  double angle = 2 * std::numbers::pi;
  double t0 = 0.0;
  std::string perturbation = "zero";
  std::vector<double> margin_radii;
  std::string csv;
  int samples = 513;
};

int run_curvature(const CurvatureOpts& o, const Common& c, const std::vector<std::string>& args, std::ostream& out) {
  const double angle = c.h_fraction ? o.angle * std::numbers::pi : o.angle;
  const Perturbation f = parse_perturbation(o.perturbation);
  const ParametricCurve curve = almost_helical_curve(o.r, f, o.t0, o.t0 + angle);
  const double total = total_curvature(curve, 1e-12);
  Json payload{{"r", fixed(o.r)}, {"angle", fixed(angle)}, {"perturbation", o.perturbation}, {"total", fixed(total)}};
  bool pass = true;
  if (o.perturbation == "zero") {
    const double closed = helix_total_curvature(o.r, angle);
    const double rel = std::abs(total - closed) / closed;
    payload["closed_form"] = fixed(closed);
    payload["relative_error"] = fixed(rel, 3);
    pass = rel < 1e-6;
  }
  if (!o.margin_radii.empty()) {
    const auto rows = arc_margin_check(f, angle, o.margin_radii);
    Json jr = Json::array();
    for (const auto& row : rows) {
      jr.push_back(to_json(row));
      pass = pass && row.pass;
    }
    payload["margins"] = jr;
    payload["threshold"] = fixed(arc_margin_threshold(rows));
  }
  payload["pass"] = pass;
  if (!o.csv.empty()) {
    auto f_out = open_out(o.csv);
    write_curve_csv(f_out, curve, o.samples);
  }
  emit(c.report, payload, command_metadata(args), out);
  return pass ? kOk : kCheckFailed;
}

struct GateOpts {
  double h = std::numbers::pi / 2;
  double R = 1.0;
  std::string perturbation = "zero";
};

int run_gate(const GateOpts& o, const Common& c, const std::vector<std::string>& args, std::ostream& out) {
  const double h = c.h_fraction ? o.h * std::numbers::pi : o.h;
  const CurvatureReport rep = boundary_gate(h, o.R, parse_perturbation(o.perturbation));
  Json payload = to_json(rep);
  payload["h"] = fixed(h);
  payload["R"] = fixed(o.R);
  emit(c.report, payload, command_metadata(args), out);
  if (!c.report.empty()) out << "gate: total " << rep.total << (rep.pass ? " < 4pi\n" : " >= 4pi\n");
  return rep.pass ? kOk : kCheckFailed;
}

struct WeierOpts {
  std::string g = "exp(z)";
  std::string dh = "i";
  std::string domain = "rect";
  std::vector<double> rect{-1.5, 1.5, -2.0, 2.0};
  std::vector<double> annulus{0.5, 2.0};
  std::vector<int> n{41, 41};
  std::string puncture = "inf";
  double residue_radius = 0.5;
  std::string obj;
  std::optional<double> register_pitch;
  std::optional<int> expect_order;
};

int run_weier(const WeierOpts& o, const Common& c, const std::vector<std::string>& args, std::ostream& out) {
  const WeierstrassData data{parse_expr(o.g), parse_expr(o.dh), "custom"};
  const ParamMesh domain = o.domain == "rect" ? ParamMesh::rectangle(o.rect[0], o.rect[1], o.rect[2], o.rect[3], o.n[0], o.n[1])
                                              : ParamMesh::annulus(o.annulus[0], o.annulus[1], o.n[0], o.n[1]);
  Json payload{{"g", data.g.str()}, {"dh", data.dh_coef.str()}};
  bool pass = true;
  try {
    const Immersion im = immerse(data, domain);
    payload["period_error"] = fixed(im.worst_period, 3);
    payload["mean_curvature_sup"] = fixed(mean_curvature(im.mesh).sup, 6);
    if (o.register_pitch) {
      const auto reg = register_to_helicoid(im.mesh, HelicoidSpec(*o.register_pitch, 0.0));
      payload["registration"] = to_json(reg);
    }
    if (!o.obj.empty()) {
      auto f = open_out(o.obj);
      write_obj(f, im.mesh);
    }
  } catch (const PeriodError& e) {
    payload["period_failure"] = e.what();
    pass = false;
  }

  const Expr dlog_g = data.g.derivative() / data.g;
  FormCoef dh = [&](Complex z) { return data.dh_coef(z); };
  FormCoef dg = [&](Complex z) { return dlog_g(z); };
  Complex center = 0.0;
  if (o.puncture == "inf") {
    dh = at_infinity(dh);
    dg = at_infinity(dg);
  } else {
    center = parse_point(o.puncture);
  }
  const std::vector<double> radii{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  const auto order_dh = pole_order(dh, center, radii);
  const auto order_dg = pole_order(dg, center, radii);
  payload["puncture"] = o.puncture;
  payload["dh_at_puncture"] = residue_json(residue(dh, center, o.residue_radius), order_dh);
  payload["dg_over_g_at_puncture"] = residue_json(residue(dg, center, o.residue_radius), order_dg);
  if (o.expect_order) pass = pass && order_dh.order == *o.expect_order && order_dg.order == *o.expect_order;
  payload["pass"] = pass;
  emit(c.report, payload, command_metadata(args), out);
  return pass ? kOk : kCheckFailed;
}

struct MeshOpts {
  std::string obj;
  std::string theta;
  std::vector<double> alphas;
  std::vector<std::string> symmetries;
  double h = 0.0;
  std::optional<int> expect_chi;
};

int run_mesh(const MeshOpts& o, const Common& c, const std::vector<std::string>& args, std::ostream& out) {
  auto in = open_in(o.obj);
  TriMesh mesh = read_obj(in);
  if (!o.theta.empty()) {
    auto tin = open_in(o.theta);
    read_theta_csv(tin, mesh);
  }
  const double h = c.h_fraction ? o.h * std::numbers::pi : o.h;
  const Topology top = euler_genus(mesh);
  Json payload{{"topology", to_json(top)}};
  if (mesh.theta) {
    const FRange r = f_range(mesh);
    payload["f_range"] = {fixed(r.a), fixed(r.b)};
  }
  Json levels = Json::array();
  for (double a : o.alphas) {
    Json comps = Json::array();
    for (const auto& pl : level_set(mesh, a)) comps.push_back(to_json(pl));
    levels.push_back({{"alpha", fixed(a)}, {"components", comps}});
  }
  if (!o.alphas.empty()) payload["level_sets"] = levels;
  Json sym = Json::object();
  for (const auto& name : o.symmetries) {
    const Symmetry s = name == "rho_x"   ? Symmetry::rho_x
                       : name == "rho_y" ? Symmetry::rho_y
                       : name == "rho_z" ? Symmetry::rho_z
                                         : Symmetry::sigma_rho_x;
    sym[name] = to_json(symmetry_deviation(mesh, s, h));
  }
  if (!o.symmetries.empty()) payload["symmetry"] = sym;
  const bool pass = !o.expect_chi || top.euler == *o.expect_chi;
  payload["pass"] = pass;
  emit(c.report, payload, command_metadata(args), out);
  return pass ? kOk : kCheckFailed;
}

int run_all_checks(const Common& c, const std::vector<std::string>& args, std::ostream& out) {
  const auto results = acceptance::run_all();
  for (const auto& r : results) out << acceptance::format_line(r) << '\n';
  const Json payload = acceptance::suite_payload(results);
  if (!c.report.empty()) {
    Json meta = command_metadata(args);
    meta["seconds"] = acceptance::suite_timings(results);
    write_json(c.report, wrap_report(payload, stamped_metadata(meta)));
  }
  return payload["pass"].get<bool>() ? kOk : kCheckFailed;
}

// Replaces "--config path" by "--key value..." tokens for every key not
// already given on the command line. Values split on whitespace so list
// options ("window = 4 32") work.
std::vector<std::string> with_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::string path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) {
      path = args[++k];
    } else if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
    } else {
      out.push_back(args[k]);
    }
  }
  if (path.empty()) return out;
  auto in = open_in(path);
  for (const auto& [key, value] : read_key_values(in)) {
    const std::string flag = "--" + key;
    const bool given = std::any_of(out.begin(), out.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given) continue;
    out.push_back(flag);
    std::stringstream ss(value);
    for (std::string tok; ss >> tok;) out.push_back(tok);
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Helicoid toolkit: wedge solver, decay fits, curvature gates, Weierstrass and mesh checks", "helicoid"};
  app.set_help_flag("--help", "Print this help message and exit");  // -h would clash with --h
  app.require_subcommand(1, 1);
  app.fallthrough();
  Common common;
  app.add_flag("--h-as-fraction-of-pi", common.h_fraction, "Read angles (h, --angle) as multiples of pi");

  auto with_common = [&](CLI::App* sub) {
    sub->add_option("--report", common.report, "JSON report path (payload + metadata); stdout payload if absent");
    // expanded into flags by with_config() before parsing; declared for --help
    sub->add_option("--config", "key = value file using the flag names as keys");
    return sub;
  };

  SolveOpts so;
  auto* solve = with_common(app.add_subcommand("solve", "Newton solve of the wedge Dirichlet problem"));
  solve->add_option("--h", so.h, "half-angle");
  solve->add_option("--A", so.A, "inner radius");
  solve->add_option("--Rout,--R_out", so.Rout, "outer radius");
  solve->add_option("--nr,--n_r", so.nr, "radial nodes");
  solve->add_option("--ntheta,--n_theta", so.ntheta, "angular nodes");
  solve->add_option("--spacing", so.spacing, "uniform | geometric");
  solve->add_option("--inner,--inner_bc", so.inner, "inner profile: theta | cos:amp[:k] | sin:amp[:k]");
  solve->add_option("--outer,--outer_bc", so.outer, "outer profile");
  solve->add_option("--tol", so.tol, "sup |Q| tolerance");
  solve->add_option("--max-iters,--max_iters", so.max_iters, "Newton step budget");
  solve->add_option("--max-halvings,--damping_max_halvings", so.max_halvings, "step halvings per iteration");
  solve->add_option("--out", so.out, "field CSV path");

  DecayOpts dop;
  auto* decay = with_common(app.add_subcommand("decay", "Decay exponent fit and derivative checks of u - theta"));
  decay->add_option("--field", dop.field, "field CSV from solve")->required();
  decay->add_option("--window", dop.window, "fit window r_lo r_hi")->expected(2)->required();
  decay->add_option("--beta", dop.beta, "exponent in the derivative checks");
  decay->add_option("--expect", dop.expect, "bracket lo hi for beta_hat")->expected(2);
  decay->add_flag("--raw", dop.raw, "field already holds the deviation w");

  CurvatureOpts co;
  auto* curv = with_common(app.add_subcommand("curvature", "Total curvature of an almost-helical curve"));
  curv->add_option("--r", co.r, "radius")->required();
  curv->add_option("--angle", co.angle, "parameter interval length A");
  curv->add_option("--t0", co.t0, "interval start");
  curv->add_option("--f,--perturbation", co.perturbation, "zero | const:c | cos:amp:p | sin:amp:p");
  curv->add_option("--margin-radii", co.margin_radii, "radii for the margin table")->delimiter(',');
  curv->add_option("--csv", co.csv, "curve samples CSV path");
  curv->add_option("--samples", co.samples, "CSV sample count");

  GateOpts go;
  auto* gate = with_common(app.add_subcommand("gate", "Boundary total curvature against 4 pi"));
  gate->add_option("--h", go.h, "half-angle");
  gate->add_option("--R", go.R, "radius")->required();
  gate->add_option("--f,--perturbation", go.perturbation, "perturbation of the arcs");

  WeierOpts wo;
  auto* weier = with_common(app.add_subcommand("weier", "Weierstrass immersion and end diagnostics"));
  weier->add_option("--g", wo.g, "Gauss map g(z)");
  weier->add_option("--dh", wo.dh, "coefficient of dh = c(z) dz");
  weier->add_option("--domain", wo.domain, "rect | annulus")->check(CLI::IsMember({"rect", "annulus"}));
  weier->add_option("--rect", wo.rect, "u0 u1 v0 v1")->expected(4);
  weier->add_option("--annulus", wo.annulus, "r0 r1")->expected(2);
  weier->add_option("--n", wo.n, "samples per direction")->expected(2);
  weier->add_option("--puncture", wo.puncture, "inf | re | re,im");
  weier->add_option("--residue-radius", wo.residue_radius, "contour radius (in 1/z at inf)");
  weier->add_option("--obj", wo.obj, "OBJ output path");
  weier->add_option("--register-pitch", wo.register_pitch, "register the mesh onto the helicoid of this pitch");
  weier->add_option("--expect-order", wo.expect_order, "required pole order of dh and dg/g");

  MeshOpts mo;
  auto* mesh = with_common(app.add_subcommand("mesh", "Topology, F-level sets and symmetry of an OBJ mesh"));
  mesh->add_option("--obj", mo.obj, "OBJ input")->required();
  mesh->add_option("--theta", mo.theta, "vertex,theta sidecar CSV");
  mesh->add_option("--alpha", mo.alphas, "levels of F = theta - z")->delimiter(',');
  mesh->add_option("--symmetry", mo.symmetries, "rho_x,rho_y,rho_z,sigma_rho_x")
      ->delimiter(',')
      ->check(CLI::IsMember({"rho_x", "rho_y", "rho_z", "sigma_rho_x"}));
  mesh->add_option("--h", mo.h, "screw angle for sigma_rho_x");
  mesh->add_option("--expect-chi", mo.expect_chi, "required Euler characteristic");

  auto* all = with_common(app.add_subcommand("all-checks", "Run the acceptance suite"));

  std::vector<std::string> expanded;
  try {
    expanded = with_config(args);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  try {
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*solve) return run_solve(so, common, args, out);
    if (*decay) return run_decay(dop, common, args, out);
    if (*curv) return run_curvature(co, common, args, out);
    if (*gate) return run_gate(go, common, args, out);
    if (*weier) return run_weier(wo, common, args, out);
    if (*mesh) return run_mesh(mo, common, args, out);
    if (*all) return run_all_checks(common, args, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace helicoid::cli
