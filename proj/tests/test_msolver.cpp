#include "helicoid/errors.hpp"
#include "helicoid/geometry.hpp"
#include "helicoid/msolver.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace helicoid;

namespace {

double sup_interior(const ScalarField& f) {
  const auto& g = f.grid();
  double s = 0;
  for (int j = 1; j + 1 < g.n_theta(); ++j)
    for (int i = 1; i + 1 < g.n_r(); ++i) s = std::max(s, std::abs(f.at(i, j)));
  return s;
}

// Scherk's surface z = log(cos y / cos x), minimal for |x|, |y| < π/2.
double scherk(double r, double t) { return std::log(std::cos(r * std::sin(t)) / std::cos(r * std::cos(t))); }

DirichletData from_function(std::function<double(double, double)> fn, double A, double R) {
  DirichletData d;
  d.inner = [fn, A](double t) { return fn(A, t); };
  d.outer = [fn, R](double t) { return fn(R, t); };
  d.ray = fn;
  return d;
}

}  // namespace

TEST_CASE("q_residual examples") {
  const WedgeGrid g(1, 8, kPi / 2, 65, 33);
  CHECK(q_residual(ScalarField::sample(g, [](double, double t) { return t; })).sup_abs() < 1e-10);
  // planes and x² on a small fine wedge; the polar stencils are not exact on either
  const WedgeGrid f(1, 2, kPi / 4, 129, 129);
  const auto plane = ScalarField::sample(f, [](double r, double t) { return 2 * r * std::cos(t) - r * std::sin(t) + 3; });
  CHECK(sup_interior(q_residual(plane)) < 1e-3);
  const auto sq = q_residual(ScalarField::sample(f, [](double r, double t) { return std::pow(r * std::cos(t), 2); }));
  CHECK(sup_interior(sq - ScalarField::constant(f, 2.0)) < 1e-2);
}

TEST_CASE("q_residual of Scherk's surface vanishes at second order") {
  std::vector<double> err;
  for (int n : {33, 65, 129}) {
    const WedgeGrid g(0.2, 1.2, kPi / 4, n, n);
    err.push_back(q_residual(ScalarField::sample(g, scherk)).sup_abs());
  }
  for (std::size_t k = 0; k + 1 < err.size(); ++k) CHECK(std::log2(err[k] / err[k + 1]) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("assemble_linearization examples") {
  const WedgeGrid g(1, 8, kPi / 2, 33, 17);
  const auto theta = ScalarField::sample(g, [](double, double t) { return t; });
  const auto c = assemble_linearization(theta, theta);
  // u = θ: u₁ = -sin θ / r, u₂ = cos θ / r, so a11 = 1 + cos²θ/r², a12 = -sin θ cos θ / r²
  for (int j = 0; j < g.n_theta(); ++j)
    for (int i = 0; i < g.n_r(); ++i) {
      const std::size_t k = g.index(i, j);
      const double r = g.r(i), t = g.theta(j);
      CHECK(c.a11[k] == doctest::Approx(1 + std::pow(std::cos(t) / r, 2)).epsilon(1e-9));
      CHECK(c.a22[k] == doctest::Approx(1 + std::pow(std::sin(t) / r, 2)).epsilon(1e-9));
      CHECK(std::abs(c.a12[k] + std::sin(t) * std::cos(t) / (r * r)) < 1e-9);
    }
  // the ellipticity certificate: a11 a22 - a12² = 1 + |Du|² = 1 + 1/r²
  CHECK(c.min_determinant() == doctest::Approx(1 + 1 / 64.0).epsilon(1e-9));

  const auto zero = ScalarField::constant(g, 0.0);
  const auto cz = assemble_linearization(zero, zero);
  CHECK(cz.min_determinant() == 1.0);
  CHECK(apply_linearization(cz, zero).sup_abs() == 0.0);

  const WedgeGrid other(1, 9, kPi / 2, 33, 17);
  CHECK_THROWS_AS(assemble_linearization(theta, ScalarField::constant(other, 0.0)), DomainError);
}

TEST_CASE("discrete Q(u) - Q(v) equals L(u - v) to roundoff") {
  for (auto sp : {RadialSpacing::uniform, RadialSpacing::geometric}) {
    const WedgeGrid g(1, 10, 1.4, 41, 29, sp);
    const auto u = ScalarField::sample(g, [](double r, double t) { return t + std::sin(2 * t) / r + 0.3 * std::log(r); });
    const auto v = ScalarField::sample(g, [](double r, double t) { return 0.5 * t * t - std::cos(t) * r / 10; });
    const auto lhs = q_residual(u) - q_residual(v);
    const auto rhs = apply_linearization(assemble_linearization(u, v), u - v);
    const double scale = std::max(1.0, q_residual(u).sup_abs() + q_residual(v).sup_abs());
    CHECK((lhs - rhs).sup_abs() / scale < 1e-12);
  }
}

TEST_CASE("newton_solve takes no steps on exact helicoid data") {
  const WedgeGrid g(1, 64, kPi / 2, 65, 17, RadialSpacing::geometric);
  const auto id = [](double t) { return t; };
  const auto rep = newton_solve(g, DirichletData::helicoidal(id, id));
  CHECK(rep.converged);
  CHECK(rep.iterations == 0);
  CHECK(rep.residuals.size() == 1);
  CHECK((rep.field - ScalarField::sample(g, [](double, double t) { return t; })).sup_abs() == 0.0);
}

TEST_CASE("newton_solve recovers Scherk's surface") {
  std::vector<double> err;
  for (int n : {17, 33, 65}) {
    const WedgeGrid g(0.2, 1.2, kPi / 4, n, n);
    const auto rep = newton_solve(g, from_function(scherk, 0.2, 1.2));
    REQUIRE(rep.converged);
    for (std::size_t k = 1; k < rep.residuals.size(); ++k) CHECK(rep.residuals[k] < rep.residuals[k - 1]);
    CHECK(rep.residuals.back() <= 1e-10);
    err.push_back((rep.field - ScalarField::sample(g, scherk)).sup_abs());
  }
  CHECK(err.back() < 1e-4);
  for (std::size_t k = 0; k + 1 < err.size(); ++k) CHECK(std::log2(err[k] / err[k + 1]) > 1.7);
}

TEST_CASE("newton_solve recovers a plane to discretization accuracy") {
  const auto plane = [](double r, double t) { return 0.4 * r * std::cos(t) + 0.7 * r * std::sin(t) - 1; };
  const WedgeGrid g(1, 3, 1.0, 49, 49);
  const auto rep = newton_solve(g, from_function(plane, 1, 3));
  CHECK(rep.converged);
  CHECK((rep.field - ScalarField::sample(g, plane)).sup_abs() < 1e-4);
}

TEST_CASE("perturbed helicoid: the deviation peaks on the boundary") {
  const WedgeGrid g(1, 64, kPi / 2, 97, 25, RadialSpacing::geometric);
  const auto rep = newton_solve(g, DirichletData::helicoidal(parse_profile("cos:0.5", kPi / 2),
                                                             parse_profile("theta", kPi / 2)));
  REQUIRE(rep.converged);
  const auto w = rep.field - ScalarField::sample(g, [](double, double t) { return t; });
  double boundary = 0, interior = 0;
  for (int j = 0; j < g.n_theta(); ++j)
    for (int i = 0; i < g.n_r(); ++i)
      (g.is_boundary(i, j) ? boundary : interior) = std::max(g.is_boundary(i, j) ? boundary : interior,
                                                             std::abs(w.at(i, j)));
  CHECK(boundary == doctest::Approx(0.5));
  CHECK(interior <= boundary);
  CHECK(interior > 0.0);
}

TEST_CASE("newton_solve validates its configuration") {
  const WedgeGrid g(1, 4, kPi / 2, 9, 9);
  const auto id = [](double t) { return t; };
  SolverConfig bad;
  bad.tol = 0;
  CHECK_THROWS_AS(newton_solve(g, DirichletData::helicoidal(id, id), bad), ValidationError);
  // inner data that misses the rays at the corners
  CHECK_THROWS_AS(newton_solve(g, DirichletData::helicoidal([](double t) { return t + 1; }, id)), ValidationError);
  SolverConfig none;
  none.max_iters = 0;
  const auto rep = newton_solve(g, DirichletData::helicoidal(parse_profile("cos:0.5", kPi / 2), id), none);
  CHECK_FALSE(rep.converged);
  CHECK(rep.iterations == 0);
}

TEST_CASE("parse_profile") {
  const double h = kPi / 2;
  CHECK(parse_profile("theta", h)(0.3) == 0.3);
  CHECK(parse_profile("cos:0.5", h)(0.0) == doctest::Approx(0.5));
  CHECK(parse_profile("cos:0.5", h)(h) == doctest::Approx(h));
  CHECK(parse_profile("cos:0.5:3", h)(0.0) == doctest::Approx(0.5));
  CHECK(parse_profile("sin:0.2", h)(h / 2) == doctest::Approx(h / 2 + 0.2));
  CHECK(parse_profile("sin:0.2:2", h)(h) == doctest::Approx(h));
  CHECK_THROWS_AS(parse_profile("cos:0.5:2", h), ValidationError);
  CHECK_THROWS_AS(parse_profile("cos:x", h), ValidationError);
  CHECK_THROWS_AS(parse_profile("parabola", h), ValidationError);
}

TEST_CASE("schwarz_extend") {
  const WedgeGrid g(1, 8, kPi / 4, 17, 9);
  const auto theta = ScalarField::sample(g, [](double, double t) { return t; });
  const auto ext = schwarz_extend(theta);
  CHECK(ext.grid().n_theta() == 2 * g.n_theta() - 1);
  CHECK(ext.grid().half_angle() == doctest::Approx(kPi / 2));
  for (int j = 0; j < ext.grid().n_theta(); ++j)
    for (int i = 0; i < ext.grid().n_r(); ++i) CHECK(ext.at(i, j) == doctest::Approx(ext.grid().theta(j)));

  // original values survive, reflected values satisfy the reflection rule
  const auto u = ScalarField::sample(g, [](double r, double t) { return t + std::cos(2 * t) * (1 - (t * t) / (kPi * kPi / 16)) / r; });
  const auto e = schwarz_extend(u);
  const int off = (e.grid().n_theta() - g.n_theta()) / 2;
  const int top = g.n_theta() - 1;
  for (int i = 0; i < g.n_r(); ++i) {
    for (int j = 0; j < g.n_theta(); ++j) CHECK(e.at(i, j + off) == u.at(i, j));
    for (int p = 1; p <= off; ++p) {
      CHECK(e.at(i, top + off + p) == doctest::Approx(2 * u.at(i, top) - u.at(i, top - p)));
      CHECK(e.at(i, off - p) == doctest::Approx(2 * u.at(i, 0) - u.at(i, p)));
    }
  }
  CHECK_THROWS_AS(schwarz_extend(ScalarField::constant(WedgeGrid(1, 2, 2.0, 5, 5), 0.0)), DomainError);
}

TEST_CASE("schwarz extension of a solved field stays nearly minimal") {
  const WedgeGrid g(1, 16, kPi / 4, 65, 33, RadialSpacing::geometric);
  const auto rep = newton_solve(g, DirichletData::helicoidal(parse_profile("cos:0.3", kPi / 4),
                                                             parse_profile("theta", kPi / 4)));
  REQUIRE(rep.converged);
  // the reflected surface is the π-rotation about the boundary ray, so it stays minimal
  const auto ext = schwarz_extend(rep.field);
  CHECK(sup_interior(q_residual(ext)) < 5e-2);
}

TEST_CASE("laplacian_limit_check") {
  const WedgeGrid g(1, 64, kPi / 2, 129, 33, RadialSpacing::geometric);
  const double scales[] = {2, 4, 8, 16, 32};
  const auto zero = ScalarField::constant(g, 0.0);
  for (const auto& d : laplacian_limit_check(zero, zero, scales)) CHECK(d.total() == 0.0);

  const auto theta = ScalarField::sample(g, [](double, double t) { return t; });
  const auto dev = laplacian_limit_check(theta, theta, scales);
  REQUIRE(dev.size() == 5);
  for (std::size_t k = 0; k + 1 < dev.size(); ++k) {
    // coefficients of θ decay like R⁻²
    CHECK(std::log2(dev[k].total() / dev[k + 1].total()) == doctest::Approx(2.0).epsilon(0.1));
  }
  const double out_of_range[] = {1.5};
  CHECK_THROWS_AS(laplacian_limit_check(theta, theta, out_of_range), DomainError);
  const double too_big[] = {40};
  CHECK_THROWS_AS(laplacian_limit_check(theta, theta, too_big), DomainError);
}

TEST_CASE("make_solve_problem and read_key_values") {
  const auto p = make_solve_problem({});
  CHECK(p.grid.inner_radius() == 1.0);
  CHECK(p.grid.outer_radius() == 64.0);
  CHECK(p.grid.n_r() == 129);
  CHECK(p.grid.n_theta() == 33);
  CHECK(p.grid.spacing() == RadialSpacing::geometric);
  CHECK(p.inner_spec == "cos:0.5");
  CHECK(p.outer_spec == "theta");

  std::istringstream in("# comment\nA = 2\nR_out=32  # trailing\n\nspacing = uniform\nn_theta = 9\ntol = 1e-8\n");
  const auto q = make_solve_problem(read_key_values(in));
  CHECK(q.grid.inner_radius() == 2.0);
  CHECK(q.grid.outer_radius() == 32.0);
  CHECK(q.grid.spacing() == RadialSpacing::uniform);
  CHECK(q.grid.n_theta() == 9);
  CHECK(q.config.tol == 1e-8);

  try {
    make_solve_problem({{"colour", "red"}});
    FAIL("unknown key accepted");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "colour");
  }
  CHECK_THROWS_AS(make_solve_problem({{"n_r", "12.5"}}), ValidationError);
  CHECK_THROWS_AS(make_solve_problem({{"tol", "abc"}}), ValidationError);
  std::istringstream broken("A 2\n");
  CHECK_THROWS_AS(read_key_values(broken), ValidationError);
}
