#include "helicoid/errors.hpp"
#include "helicoid/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace helicoid;

namespace {

bool near(const Vec3& a, const Vec3& b, double tol = 1e-14) { return (a - b).norm() <= tol; }

// Brute-force distance to the full helicoid: dense (r, θ) sampling, then
// repeated local grid refinement around the best sample.
double brute_force_distance(const Vec3& p, const HelicoidSpec& s) {
  double best = 1e300, br = 0, bt = 0;
  for (int i = 0; i <= 400; ++i)
    for (int j = 0; j <= 400; ++j) {
      const double r = -4.0 + 8.0 * i / 400, t = -5.0 + 10.0 * j / 400;
      const double d = (p - helicoid_point(s, r, t)).norm();
      if (d < best) best = d, br = r, bt = t;
    }
  double span = 0.04;
  for (int round = 0; round < 40; ++round, span *= 0.5) {
    const double r0 = br, t0 = bt;
    for (int i = -10; i <= 10; ++i)
      for (int j = -10; j <= 10; ++j) {
        const double r = r0 + span * i / 10, t = t0 + span * j / 10;
        const double d = (p - helicoid_point(s, r, t)).norm();
        if (d < best) best = d, br = r, bt = t;
      }
  }
  return best;
}

}  // namespace

TEST_CASE("helicoid_point examples") {
  const auto H = HelicoidSpec::standard();
  CHECK(near(helicoid_point(H, 1, 0), Vec3(1, 0, 0)));
  CHECK(near(helicoid_point(H, 0, 5), Vec3(0, 0, 5)));
  CHECK(near(helicoid_point(H, 2, kPi / 2), Vec3(0, 2, kPi / 2)));
  // pitch and phase
  const HelicoidSpec s(2.0, kPi / 2);
  CHECK(near(helicoid_point(s, 1, 0), Vec3(0, 1, 0)));
  CHECK(helicoid_point(s, 3, 1.25).z() == doctest::Approx(2.5));
}

TEST_CASE("HelicoidSpec validation") {
  CHECK_THROWS_AS(HelicoidSpec(0.0, 0.0), ValidationError);
  CHECK(HelicoidSpec(1.0, 2 * kPi + 0.5).phase() == doctest::Approx(0.5));
}

TEST_CASE("screw motions compose additively") {
  CHECK(near(apply_screw(ScrewMotion::sigma(kPi), Vec3(1, 0, 0)), Vec3(-1, 0, kPi)));
  const Vec3 p(0.3, -1.2, 0.7);
  CHECK(near(apply_screw({}, p), p));
  const ScrewMotion m{0.7, -0.4};
  CHECK(near(apply_screw(m, apply_screw(m, p)), apply_screw(m.times(2), p)));
  const ScrewMotion n{-1.1, 2.0};
  CHECK(near(apply_screw(n, apply_screw(m, p)), apply_screw(m.then(n), p)));
  CHECK(near(apply_screw(m.inverse(), apply_screw(m, p)), p));
}

TEST_CASE("leaf_parameter examples") {
  const auto H = HelicoidSpec::standard();
  CHECK(leaf_parameter(Vec3(1, 0, 0), H) == doctest::Approx(0.0));
  CHECK(leaf_parameter(Vec3(0, 1, 0), H) == doctest::Approx(kPi / 2));
  CHECK(leaf_parameter(Vec3(1, 0, kPi), H) == doctest::Approx(kPi));
  CHECK_THROWS_AS(leaf_parameter(Vec3(0, 0, 3), H), DomainError);
}

TEST_CASE("leaf_parameter is invariant under the helicoid's screw family") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3, 3);
  for (double pitch : {1.0, -0.5, 2.5}) {
    const HelicoidSpec s(pitch, 0.0);
    for (int k = 0; k < 200; ++k) {
      const Vec3 p(u(rng), u(rng), u(rng));
      const double a = u(rng);
      const double before = leaf_parameter(p, s), after = leaf_parameter(apply_screw({a, a * pitch}, p), s);
      // compare on the circle
      CHECK(std::abs(std::remainder(before - after, 2 * kPi)) < 1e-10);
    }
  }
}

TEST_CASE("rotate_helicoid") {
  const auto H = HelicoidSpec::standard();
  CHECK(rotate_helicoid(H, kPi / 2).phase() == doctest::Approx(kPi / 2));
  CHECK(rotate_helicoid(H, kPi / 2).pitch() == 1.0);
  CHECK(std::abs(std::remainder(rotate_helicoid(H, 2 * kPi).phase() - H.phase(), 2 * kPi)) < 1e-15);
  const auto twice = rotate_helicoid(rotate_helicoid(H, 0.8), 0.8), once = rotate_helicoid(H, 1.6);
  CHECK(twice.phase() == doctest::Approx(once.phase()));
}

TEST_CASE("rotation moves helicoid points to the leaf shifted by alpha") {
  // leaf_parameter does not subtract the phase: points of the rotated
  // helicoid carry leaf values phase + α or phase + α + π.
  const auto H = HelicoidSpec::standard();
  for (double alpha : {0.3, 1.9, 4.0}) {
    const auto R = rotate_helicoid(H, alpha);
    for (double t : {-2.0, 0.4, 3.3}) {
      const double lp = leaf_parameter(helicoid_point(R, 1.5, t), H);
      CHECK(std::abs(std::remainder(lp - alpha, 2 * kPi)) < 1e-12);
      const double lm = leaf_parameter(helicoid_point(R, -1.5, t), H);
      CHECK(std::abs(std::remainder(lm - alpha - kPi, 2 * kPi)) < 1e-12);
    }
  }
}

TEST_CASE("angle_field_on_graph") {
  const WedgeGrid g(1.0, 20.0, kPi / 2, 39, 17);
  CHECK(angle_field_on_graph(ScalarField::sample(g, [](double, double t) { return t; })).sup_abs() == 0.0);
  const auto shifted = angle_field_on_graph(ScalarField::sample(g, [](double, double t) { return t - 0.3; }));
  for (double v : shifted.values()) CHECK(v == doctest::Approx(0.3));
  const auto F = angle_field_on_graph(
      ScalarField::sample(g, [](double r, double t) { return t + std::cos(t) / r; }));
  // r = 10 is level 18 on this uniform grid
  REQUIRE(g.r(18) == doctest::Approx(10.0));
  double sup = 0;
  for (int j = 0; j < g.n_theta(); ++j) sup = std::max(sup, std::abs(F.at(18, j)));
  CHECK(sup == doctest::Approx(0.1));
}

TEST_CASE("distance_to_helicoid") {
  const auto H = HelicoidSpec::standard();
  const double tol = 1e-9;
  for (double r : {-2.0, 0.0, 0.7, 3.0})
    for (double t : {-1.0, 0.5, 2.0}) CHECK(distance_to_helicoid(helicoid_point(H, r, t), H, tol) <= tol);

  const Vec3 p(0, 1, 0);
  CHECK(distance_to_helicoid(p, H, tol) == doctest::Approx(brute_force_distance(p, H)).epsilon(1e-8));
  const HelicoidSpec s(0.6, 1.1);
  for (const Vec3& q : {Vec3(1.3, -0.4, 0.9), Vec3(-0.2, 2.0, -1.5), Vec3(0.0, 0.0, 0.3)})
    CHECK(std::abs(distance_to_helicoid(q, s, tol) - brute_force_distance(q, s)) <= 1e-8);

  // the helicoid's own screw symmetry preserves distances
  const ScrewMotion m{0.9, 0.9 * s.pitch()};
  const Vec3 q(1.0, 0.5, -0.2);
  CHECK(std::abs(distance_to_helicoid(q, s, tol) - distance_to_helicoid(apply_screw(m, q), s, tol)) <= 2 * tol);
  CHECK_THROWS_AS(distance_to_helicoid(q, s, 0.0), ValidationError);
}

TEST_CASE("distance vanishes exactly on the two leaves of the helicoid") {
  const HelicoidSpec s(1.0, 0.4);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 50; ++k) {
    const Vec3 p(u(rng), u(rng), u(rng));
    const double lp = leaf_parameter(p, s);
    const bool on_leaf = std::abs(std::remainder(lp - s.phase(), kPi)) < 1e-12;
    CHECK_FALSE(on_leaf);  // random points are off the surface
    CHECK(distance_to_helicoid(p, s, 1e-9) > 1e-9);
    // move p onto the leaf through it, at the same height
    const double t = p.z() / s.pitch();
    const Vec3 on = helicoid_point(s, std::hypot(p.x(), p.y()), t);
    CHECK(std::abs(std::remainder(leaf_parameter(on, s) - s.phase(), kPi)) < 1e-12);
    CHECK(distance_to_helicoid(on, s, 1e-9) <= 1e-9);
  }
}
