#include "helicoid/asymptotics.hpp"
#include "helicoid/errors.hpp"
#include "helicoid/msolver.hpp"

#include <doctest.h>

#include <cmath>

using namespace helicoid;

TEST_CASE("barrier examples") {
  const auto d = make_barrier(BarrierKind::decaying, 0.5, kPi / 2, 0.9);
  CHECK(barrier_value(d, 4, 0) == doctest::Approx(0.5));
  CHECK(barrier_value(d, 1, 0.5) == doctest::Approx(std::cos(0.45)));
  const auto g = make_barrier(BarrierKind::growing, 0.5, kPi / 2, 0.9);
  CHECK(barrier_value(g, 4, 0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(barrier_value(d, 0, 0), DomainError);

  // default α is the midpoint of (β, π/(2h))
  CHECK(make_barrier(BarrierKind::decaying, 0.5, kPi / 2).alpha == doctest::Approx(0.75));
  CHECK_THROWS_AS(make_barrier(BarrierKind::decaying, 1.0, kPi / 2), ValidationError);
  CHECK_THROWS_AS(make_barrier(BarrierKind::decaying, 0.5, kPi / 2, 1.2), ValidationError);
  CHECK_THROWS_AS(make_barrier(BarrierKind::decaying, 0.5, kPi / 2, 0.4), ValidationError);
}

TEST_CASE("admissible barriers are positive with negative Laplacian") {
  for (double h : {kPi / 2, kPi / 3, kPi / 6})
    for (double beta : {0.1, 0.5, 0.9}) {
      if (beta >= kPi / (2 * h)) continue;
      for (auto kind : {BarrierKind::decaying, BarrierKind::growing}) {
        const auto s = make_barrier(kind, beta, h);
        CHECK(s.admissible());
        for (double r : {1.0, 3.0, 100.0})
          for (double t : {-h, -h / 3, 0.0, h}) CHECK(barrier_value(s, r, t) > 0.0);
        const auto chk = barrier_laplacian_check(s, WedgeGrid(1, 8, h, 65, 33, RadialSpacing::geometric));
        CHECK(chk.sign_ok);
        CHECK(chk.deviation < 1e-2);
      }
    }
}

TEST_CASE("harmonic barrier case") {
  BarrierSpec s{BarrierKind::decaying, 0.7, 0.7, kPi / 2};
  const auto chk = barrier_laplacian_check(s, WedgeGrid(1, 8, kPi / 2, 65, 33, RadialSpacing::geometric));
  CHECK(chk.sign_ok);
  CHECK(chk.deviation < 1e-2);
  s.half_angle = kPi / 3;
  CHECK_THROWS_AS(barrier_laplacian_check(s, WedgeGrid(1, 8, kPi / 2, 9, 9)), ValidationError);
}

TEST_CASE("fit_decay_exponent is exact on power laws") {
  std::vector<ProfileEntry> prof;
  for (int k = 0; k <= 40; ++k) {
    const double r = std::pow(2.0, k / 5.0);
    prof.push_back({r, 3 * std::pow(r, -0.8)});
  }
  const auto fit = fit_decay_exponent(prof, 2, 64);
  CHECK(fit.beta_hat == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(fit.residual < 1e-12);
  CHECK(fit.levels == 26);

  CHECK_THROWS_AS(fit_decay_exponent(prof, 2, 2.5), ValidationError);    // too few levels
  CHECK_THROWS_AS(fit_decay_exponent(prof, 0.5, 64), ValidationError);   // outside the profile
  CHECK_THROWS_AS(fit_decay_exponent(prof, 8, 4), ValidationError);
  prof[10].sup = 0;
  CHECK_THROWS_AS(fit_decay_exponent(prof, 2, 64), ValidationError);
  CHECK_THROWS_AS(fit_decay_exponent({}, 2, 64), ValidationError);
}

TEST_CASE("rescale_field identities") {
  const double h = kPi / 4;
  const WedgeGrid src(1, 100, 1.5 * h, 161, 61, RadialSpacing::geometric);
  const auto ref = reference_annulus(h);
  CHECK(ref.inner_radius() == 0.5);
  CHECK(ref.outer_radius() == 2.0);
  CHECK(ref.half_angle() == doctest::Approx(1.5 * h));

  // θ ↦ θ/R and log r ↦ (log R + log r)/R; bilinear in (log r, θ) is exact on both
  const auto theta = ScalarField::sample(src, [](double, double t) { return t; });
  const auto logr = ScalarField::sample(src, [](double r, double) { return std::log(r); });
  for (double R : {2.0, 7.5, 50.0}) {
    const auto a = rescale_field(theta, R, ref);
    const auto b = rescale_field(logr, R, ref);
    for (int j = 0; j < ref.n_theta(); ++j)
      for (int i = 0; i < ref.n_r(); ++i) {
        CHECK(a.at(i, j) == doctest::Approx(ref.theta(j) / R).epsilon(1e-12));
        CHECK(b.at(i, j) == doctest::Approx((std::log(R) + std::log(ref.r(i))) / R).epsilon(1e-12));
      }
  }
  CHECK_THROWS_AS(rescale_field(theta, 1.5, ref), DomainError);
  CHECK_THROWS_AS(rescale_field(theta, 60, ref), DomainError);
  CHECK_THROWS_AS(rescale_field(theta, 10, reference_annulus(kPi / 2)), DomainError);
}

TEST_CASE("derivative decay sequences") {
  const WedgeGrid g(1, 256, kPi / 2, 257, 33, RadialSpacing::geometric);
  const auto w = ScalarField::sample(g, [](double r, double t) { return std::cos(t) / r; });
  // r^{1+β}|Dw| ~ r^{β-1}
  const auto good = derivative_decay_check(w, 0.5, 4, 128);
  CHECK(good.pass());
  CHECK(good.entries.size() == 5);
  CHECK(good.entries.front().R == 4.0);
  CHECK(good.first_slope == doctest::Approx(-0.5).epsilon(0.05));
  CHECK(good.second_slope == doctest::Approx(-0.5).epsilon(0.05));
  const auto bad = derivative_decay_check(w, 1.5, 4, 128);
  CHECK_FALSE(bad.first_pass);
  CHECK_FALSE(bad.second_pass);

  const auto ang = angular_derivative_decay(w, 0.5, 4, 128);
  CHECK(ang.pass());
  CHECK(ang.first_slope == doctest::Approx(-0.5).epsilon(0.05));
  // w(r, θ) = r⁻¹ cos θ has |w_θ| = r⁻¹|sin θ|, maximal at the rays
  CHECK(ang.entries.front().first == doctest::Approx(std::pow(4.0, -0.5)).epsilon(1e-2));

  const auto zero = derivative_decay_check(ScalarField::constant(g, 0.0), 0.9, 4, 128);
  CHECK(zero.pass());
  CHECK_THROWS_AS(derivative_decay_check(w, 0.0, 4, 128), ValidationError);
  CHECK_THROWS_AS(derivative_decay_check(w, 0.5, 4, 6), ValidationError);
}

TEST_CASE("decay exponent grows as the wedge narrows") {
  std::vector<double> betas;
  for (double h : {kPi / 2, kPi / 3, kPi / 4}) {
    const WedgeGrid g(1, 64, h, 129, 17, RadialSpacing::geometric);
    const auto rep = newton_solve(g, DirichletData::helicoidal(parse_profile("cos:0.5", h), parse_profile("theta", h)));
    REQUIRE(rep.converged);
    const auto w = helicoid_deviation(rep.field);
    const auto fit = fit_decay_exponent(sup_profile(w), 2, 16);
    betas.push_back(fit.beta_hat);
  }
  CHECK(betas[0] == doctest::Approx(1.0).epsilon(0.15));
  CHECK(betas[0] < betas[1]);
  CHECK(betas[1] < betas[2]);
}

TEST_CASE("helicoid_deviation subtracts theta") {
  const WedgeGrid g(1, 4, 1.0, 9, 9);
  const auto u = ScalarField::sample(g, [](double r, double t) { return t + r; });
  const auto w = helicoid_deviation(u);
  for (int j = 0; j < g.n_theta(); ++j)
    for (int i = 0; i < g.n_r(); ++i) CHECK(w.at(i, j) == doctest::Approx(g.r(i)));
}

namespace {

std::vector<CylPoint> sheet(double pitch, double c, std::function<double(double, double)> pert, double rmax) {
  std::vector<CylPoint> s;
  for (int k = 0; k <= 20 * static_cast<int>(std::log10(rmax)); ++k) {
    const double r = std::pow(10.0, k / 20.0);
    for (int j = -4; j <= 4; ++j) {
      const double t = 0.25 * j;
      s.push_back({r, t, pitch * t + c + pert(r, t)});
    }
  }
  return s;
}

}  // namespace

TEST_CASE("helicoid_asymptote_fit") {
  const auto flat = sheet(2, 0, [](double, double) { return 0.0; }, 1e4);
  const auto a = helicoid_asymptote_fit(flat, 4 * kPi);
  CHECK(a.pitch == doctest::Approx(2.0));
  CHECK(std::abs(a.intercept) < 1e-12);
  CHECK(a.beta_max == doctest::Approx(0.5));
  CHECK(a.max_residual < 1e-12);
  CHECK_FALSE(a.decay.has_value());
  CHECK(a.antisymmetry_checked);
  CHECK(a.antisymmetry_deviation < 1e-12);

  // an even, mean-zero angular factor leaves both line coefficients unbiased,
  // so the residual is exactly r^{-1.5}|g(θ)|
  double mean = 0;
  for (int j = -4; j <= 4; ++j) mean += std::cos(0.25 * j) / 9;
  const auto g = [mean](double t) { return std::cos(t) - mean; };
  const auto even = sheet(2, 0.3, [&](double r, double t) { return std::pow(r, -1.5) * g(t); }, 1e8);
  const auto b = helicoid_asymptote_fit(even, 4 * kPi);
  CHECK(b.pitch == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(b.phase == doctest::Approx(0.15).epsilon(1e-9));
  REQUIRE(b.decay.has_value());
  // bins pair the largest radius with the largest residual, which may come from different samples
  CHECK(b.decay->beta_hat == doctest::Approx(1.5).epsilon(5e-3));
  // f(r, θ) + f(r, -θ) = 2c + 2r^{-1.5}g(θ) over θ > 0 peaks at r = 1, θ = 0.25
  CHECK(b.antisymmetry_deviation == doctest::Approx(0.6 + 2 * g(0.25)).epsilon(1e-9));

  CHECK_THROWS_AS(helicoid_asymptote_fit(flat, 0.0), ValidationError);
  const auto narrow = sheet(2, 0, [](double, double) { return 0.0; }, 10);
  CHECK_THROWS_AS(helicoid_asymptote_fit(narrow, 1.0), ValidationError);
}
