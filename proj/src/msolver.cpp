#include "helicoid/msolver.hpp"

#include "helicoid/asymptotics.hpp"
#include "helicoid/errors.hpp"
#include "helicoid/kernels.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <sstream>

namespace helicoid {

namespace {

kernels::CartesianDerivatives derivatives_of(const ScalarField& f) {
  return kernels::cartesian_derivatives(f.grid(), kernels::polar_derivatives(f.grid(), f.values()));
}

double sup_interior(const WedgeGrid& g, const std::vector<double>& q) {
  double m = 0.0;
  for (int j = 1; j < g.n_theta() - 1; ++j)
    for (int i = 1; i < g.n_r() - 1; ++i) m = std::max(m, std::abs(q[g.index(i, j)]));
  return m;
}

}  // namespace

ScalarField q_residual(const ScalarField& u) {
  return {u.grid(), kernels::minimal_surface_residual(derivatives_of(u))};
}

double LinearOpCoeffs::min_determinant() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < a11.size(); ++k) m = std::min(m, a11[k] * a22[k] - a12[k] * a12[k]);
  return m;
}

LinearOpCoeffs assemble_linearization(const ScalarField& u, const ScalarField& v) {
  if (!(u.grid() == v.grid())) throw DomainError("assemble_linearization: u and v live on different grids");
  const auto du = derivatives_of(u);
  const auto dv = derivatives_of(v);
  const std::size_t n = u.size();
  LinearOpCoeffs c{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
                   std::vector<double>(n), std::vector<double>(n)};
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < n; ++k) {
    const double u1 = du.d1[k], u2 = du.d2[k];
    const double s1 = u1 + dv.d1[k], s2 = u2 + dv.d2[k];
    c.a11[k] = 1.0 + u2 * u2;
    c.a22[k] = 1.0 + u1 * u1;
    c.a12[k] = u1 * u2;
    c.b1[k] = dv.d22[k] * s1 - dv.d12[k] * s2;
    c.b2[k] = dv.d11[k] * s2 - dv.d12[k] * s1;
  }
  // ellipticity certificate: det = 1 + |Du|² ≥ 1
  for (std::size_t k = 0; k < n; ++k) {
    const double det = c.a11[k] * c.a22[k] - c.a12[k] * c.a12[k];
    const double expect = 1.0 + du.d1[k] * du.d1[k] + du.d2[k] * du.d2[k];
    if (!(det >= 1.0 - 1e-12 * expect) || std::abs(det - expect) > 1e-10 * expect)
      throw Error("assemble_linearization: ellipticity certificate failed at node " + std::to_string(k));
  }
  return c;
}

ScalarField apply_linearization(const LinearOpCoeffs& c, const ScalarField& w) {
  if (c.a11.size() != w.size()) throw DomainError("apply_linearization: coefficient/field size mismatch");
  const auto dw = derivatives_of(w);
  std::vector<double> out(w.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = c.a11[k] * dw.d11[k] + c.a22[k] * dw.d22[k] - 2.0 * c.a12[k] * dw.d12[k] + c.b1[k] * dw.d1[k] +
             c.b2[k] * dw.d2[k];
  }
  return {w.grid(), std::move(out)};
}

// ---------------------------------------------------------------------------
// Boundary data
// ---------------------------------------------------------------------------

DirichletData DirichletData::helicoidal(AngularProfile inner, AngularProfile outer) {
  return {std::move(inner), std::move(outer), [](double, double theta) { return theta; }};
}

AngularProfile parse_profile(const std::string& text, double half_angle) {
  if (text == "theta") return [](double t) { return t; };
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() < 2 || parts.size() > 3 || (parts[0] != "cos" && parts[0] != "sin"))
    throw ValidationError("profile", "unrecognized boundary profile '" + text + "'");
  double amp = 0.0;
  int mode = 1;
  try {
    amp = std::stod(parts[1]);
    if (parts.size() == 3) mode = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw ValidationError("profile", "bad number in '" + text + "'");
  }
  const double h = half_angle;
  if (parts[0] == "cos") {
    if (mode < 1 || mode % 2 == 0) throw ValidationError("profile", "cos mode must be a positive odd integer");
    return [amp, mode, h](double t) { return t + amp * std::cos(mode * std::numbers::pi * t / (2.0 * h)); };
  }
  if (mode < 1) throw ValidationError("profile", "sin mode must be positive");
  return [amp, mode, h](double t) { return t + amp * std::sin(mode * std::numbers::pi * t / h); };
}

// ---------------------------------------------------------------------------
// Newton solver
// ---------------------------------------------------------------------------

namespace {

ScalarField impose_boundary(const WedgeGrid& g, const DirichletData& data, std::vector<double> u) {
  const int nr = g.n_r(), nt = g.n_theta();
  for (int j = 0; j < nt; ++j) {
    u[g.index(0, j)] = data.inner(g.theta(j));
    u[g.index(nr - 1, j)] = data.outer(g.theta(j));
  }
  for (int i = 0; i < nr; ++i) {
    u[g.index(i, 0)] = data.ray(g.r(i), g.theta(0));
    u[g.index(i, nt - 1)] = data.ray(g.r(i), g.theta(nt - 1));
  }
  return {g, std::move(u)};
}

void check_corners(const WedgeGrid& g, const DirichletData& d) {
  const double h = g.half_angle();
  const double checks[4][2] = {{d.inner(-h), d.ray(g.inner_radius(), -h)},
                               {d.inner(h), d.ray(g.inner_radius(), h)},
                               {d.outer(-h), d.ray(g.outer_radius(), -h)},
                               {d.outer(h), d.ray(g.outer_radius(), h)}};
  for (const auto& c : checks) {
    if (std::abs(c[0] - c[1]) > 1e-9 * (1.0 + std::abs(c[0])))
      throw ValidationError("boundary", "Dirichlet data is discontinuous at a wedge corner");
  }
}

Eigen::SparseMatrix<double> newton_jacobian(const WedgeGrid& g, const kernels::CartesianDerivatives& d) {
  const int nr = g.n_r(), nt = g.n_theta();
  const int mi = nr - 2;
  const int unknowns = mi * (nt - 2);
  const double hx = g.xi_step(), ht = g.theta_step();
  auto col = [mi](int i, int j) { return (j - 1) * mi + (i - 1); };

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(unknowns) * 9);
  for (int j = 1; j < nt - 1; ++j) {
    for (int i = 1; i < nr - 1; ++i) {
      const std::size_t k = g.index(i, j);
      const double u1 = d.d1[k], u2 = d.d2[k];
      // Fréchet derivative of Q at u: L_{u,u}
      const auto pc = kernels::cartesian_to_polar(1.0 + u2 * u2, -2.0 * u1 * u2, 1.0 + u1 * u1,
                                                  2.0 * (u1 * d.d22[k] - u2 * d.d12[k]),
                                                  2.0 * (u2 * d.d11[k] - u1 * d.d12[k]), g.r(i), g.theta(j));
      const double c_x = pc.r * g.dr1(i) + pc.rr * g.dr2_lin(i);
      const double c_xx = pc.rr * g.dr2(i);
      const double c_xt = pc.rt * g.dr1(i);
      const double c_t = pc.t;
      const double c_tt = pc.tt;

      const double w_center = -2.0 * c_xx / (hx * hx) - 2.0 * c_tt / (ht * ht);
      const double w_ip = c_xx / (hx * hx) + c_x / (2.0 * hx);
      const double w_im = c_xx / (hx * hx) - c_x / (2.0 * hx);
      const double w_jp = c_tt / (ht * ht) + c_t / (2.0 * ht);
      const double w_jm = c_tt / (ht * ht) - c_t / (2.0 * ht);
      const double w_x = c_xt / (4.0 * hx * ht);

      const int row = col(i, j);
      auto add = [&](int ii, int jj, double w) {
        if (g.is_boundary(ii, jj) || w == 0.0) return;
        trip.emplace_back(row, col(ii, jj), w);
      };
      add(i, j, w_center);
      add(i + 1, j, w_ip);
      add(i - 1, j, w_im);
      add(i, j + 1, w_jp);
      add(i, j - 1, w_jm);
      add(i + 1, j + 1, w_x);
      add(i - 1, j - 1, w_x);
      add(i + 1, j - 1, -w_x);
      add(i - 1, j + 1, -w_x);
    }
  }
  Eigen::SparseMatrix<double> jac(unknowns, unknowns);
  jac.setFromTriplets(trip.begin(), trip.end());
  return jac;
}

}  // namespace

SolveReport newton_solve(const WedgeGrid& grid, const DirichletData& data, const SolverConfig& cfg,
                         const std::optional<ScalarField>& initial) {
  if (!(cfg.tol > 0.0)) throw ValidationError("tol", "must be positive");
  if (cfg.max_iters < 0) throw ValidationError("max_iters", "must be nonnegative");
  if (cfg.max_halvings < 0) throw ValidationError("damping_max_halvings", "must be nonnegative");
  check_corners(grid, data);

  std::vector<double> start;
  if (initial) {
    if (!(initial->grid() == grid)) throw DomainError("newton_solve: initial iterate lives on another grid");
    start.assign(initial->values().begin(), initial->values().end());
  } else {
    const ScalarField seed = ScalarField::sample(grid, [](double, double t) { return t; });
    start.assign(seed.values().begin(), seed.values().end());
  }
  ScalarField u = impose_boundary(grid, data, std::move(start));

  const int nr = grid.n_r(), nt = grid.n_theta();
  const int mi = nr - 2;
  auto evaluate = [&](const ScalarField& f, kernels::CartesianDerivatives& d) {
    d = derivatives_of(f);
    const auto q = kernels::minimal_surface_residual(d);
    const double sup = sup_interior(grid, q);
    if (!std::isfinite(sup)) throw Error("newton_solve: non-finite residual");
    return std::pair{q, sup};
  };

  kernels::CartesianDerivatives d;
  auto [q, res] = evaluate(u, d);
  SolveReport report{0, {res}, false, u};

  while (res > cfg.tol && report.iterations < cfg.max_iters) {
    const auto jac = newton_jacobian(grid, d);
    Eigen::VectorXd rhs(jac.rows());
    for (int j = 1; j < nt - 1; ++j)
      for (int i = 1; i < nr - 1; ++i) rhs[(j - 1) * mi + (i - 1)] = -q[grid.index(i, j)];

    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(jac);
    lu.factorize(jac);
    if (lu.info() != Eigen::Success) break;
    const Eigen::VectorXd step = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !step.allFinite()) break;
    // linear solve contract: residual at most 1% of the nonlinear residual
    if ((jac * step - rhs).lpNorm<Eigen::Infinity>() > 0.01 * res) break;

    double lambda = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= cfg.max_halvings; ++halving, lambda *= 0.5) {
      std::vector<double> trial(u.values().begin(), u.values().end());
      for (int j = 1; j < nt - 1; ++j)
        for (int i = 1; i < nr - 1; ++i) trial[grid.index(i, j)] += lambda * step[(j - 1) * mi + (i - 1)];
      ScalarField candidate(grid, std::move(trial));
      kernels::CartesianDerivatives dc;
      auto [qc, rc] = evaluate(candidate, dc);
      if (rc < res) {
        u = std::move(candidate);
        d = std::move(dc);
        q = std::move(qc);
        res = rc;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    ++report.iterations;
    report.residuals.push_back(res);
  }
  report.converged = res <= cfg.tol;
  report.field = u;
  return report;
}

ScalarField schwarz_extend(const ScalarField& u) {
  const WedgeGrid& g = u.grid();
  const double h = g.half_angle();
  if (2.0 * h > std::numbers::pi) throw DomainError("schwarz_extend: requires half-angle at most pi/2");
  const int nt = g.n_theta();
  WedgeGrid ext(g.inner_radius(), g.outer_radius(), 2.0 * h, g.n_r(), 2 * nt - 1, g.spacing());
  const int shift = (nt - 1) / 2;
  std::vector<double> v(ext.size());
  for (int jj = 0; jj < ext.n_theta(); ++jj) {
    const int m = jj - shift;
    for (int i = 0; i < g.n_r(); ++i) {
      double value;
      if (m < 0) {
        value = 2.0 * u.at(i, 0) - u.at(i, -m);
      } else if (m > nt - 1) {
        value = 2.0 * u.at(i, nt - 1) - u.at(i, 2 * (nt - 1) - m);
      } else {
        value = u.at(i, m);
      }
      v[ext.index(i, jj)] = value;
    }
  }
  return {ext, std::move(v)};
}

std::vector<LaplacianDeviation> laplacian_limit_check(const ScalarField& u, const ScalarField& v,
                                                      std::span<const double> scales, int ref_n_r,
                                                      int ref_n_theta) {
  if (!(u.grid() == v.grid())) throw DomainError("laplacian_limit_check: u and v live on different grids");
  const WedgeGrid& g = u.grid();
  const double h = g.half_angle();
  const double lo = 2.0 * g.inner_radius();
  const double hi = 0.5 * g.outer_radius();
  for (double R : scales) {
    if (!(R >= lo * (1.0 - 1e-12) && R <= hi * (1.0 + 1e-12))) {
      std::ostringstream msg;
      msg << "laplacian_limit_check: scale R = " << R << " not covered; admissible range is [" << lo << ", " << hi
          << "]";
      throw DomainError(msg.str());
    }
  }
  const ScalarField ue = schwarz_extend(u);
  const ScalarField ve = schwarz_extend(v);
  const WedgeGrid ref = reference_annulus(h, ref_n_r, ref_n_theta);

  std::vector<LaplacianDeviation> out;
  for (double R : scales) {
    const ScalarField ur = rescale_field(ue, R, ref);
    const ScalarField vr = rescale_field(ve, R, ref);
    const LinearOpCoeffs c = assemble_linearization(ur, vr);
    double a_dev = 0.0, b_dev = 0.0;
    for (std::size_t k = 0; k < c.a11.size(); ++k) {
      a_dev = std::max({a_dev, std::abs(c.a11[k] - 1.0), std::abs(c.a22[k] - 1.0), std::abs(c.a12[k])});
      b_dev = std::max({b_dev, std::abs(c.b1[k]), std::abs(c.b2[k])});
    }
    out.push_back({R, a_dev, b_dev});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

std::vector<std::pair<std::string, std::string>> read_key_values(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string{};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config", "expected 'key = value' on line " + std::to_string(lineno));
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

SolveProblem make_solve_problem(const std::vector<std::pair<std::string, std::string>>& entries) {
  double a = 1.0, rout = 64.0, h = std::numbers::pi / 2.0;
  int n_r = 129, n_theta = 33;
  RadialSpacing spacing = RadialSpacing::geometric;
  SolverConfig cfg;
  std::string inner = "cos:0.5", outer = "theta";

  auto number = [](const std::string& key, const std::string& value) {
    try {
      std::size_t used = 0;
      const double x = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      return x;
    } catch (const std::exception&) {
      throw ValidationError(key, "not a number: '" + value + "'");
    }
  };
  auto integer = [&](const std::string& key, const std::string& value) {
    const double x = number(key, value);
    if (x != std::floor(x)) throw ValidationError(key, "not an integer: '" + value + "'");
    return static_cast<int>(x);
  };

  for (const auto& [key, value] : entries) {
    if (key == "tol") cfg.tol = number(key, value);
    else if (key == "max_iters") cfg.max_iters = integer(key, value);
    else if (key == "damping_max_halvings") cfg.max_halvings = integer(key, value);
    else if (key == "inner_bc") inner = value;
    else if (key == "outer_bc") outer = value;
    else if (key == "A") a = number(key, value);
    else if (key == "R_out") rout = number(key, value);
    else if (key == "h") h = number(key, value);
    else if (key == "n_r") n_r = integer(key, value);
    else if (key == "n_theta") n_theta = integer(key, value);
    else if (key == "spacing") {
      if (value == "uniform") spacing = RadialSpacing::uniform;
      else if (value == "geometric") spacing = RadialSpacing::geometric;
      else throw ValidationError(key, "expected 'uniform' or 'geometric'");
    } else {
      throw ValidationError(key, "unknown configuration key");
    }
  }
  WedgeGrid grid(a, rout, h, n_r, n_theta, spacing);
  return {grid, DirichletData::helicoidal(parse_profile(inner, h), parse_profile(outer, h)), cfg, inner, outer};
}

}  // namespace helicoid
