#include "helicoid/geometry.hpp"
#include "helicoid/kernels.hpp"

#include <doctest.h>

#include <cmath>

using namespace helicoid;

namespace {

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double scale = 1, d = 0;
  for (std::size_t k = 0; k < a.size(); ++k) scale = std::max(scale, std::abs(a[k]));
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d / scale;
}

}  // namespace

TEST_CASE("parallel kernels agree with the serial reference") {
  for (auto sp : {RadialSpacing::uniform, RadialSpacing::geometric}) {
    const WedgeGrid g(1, 30, 1.3, 97, 41, sp);
    const auto f = ScalarField::sample(g, [](double r, double t) {
      return t + std::cos(t) / r + 0.1 * std::sin(3 * t) * std::log(r);
    });
    const auto p = kernels::polar_derivatives(g, f.values());
    const auto ps = kernels::serial::polar_derivatives(g, f.values());
    CHECK(max_rel_diff(p.r, ps.r) < 1e-13);
    CHECK(max_rel_diff(p.t, ps.t) < 1e-13);
    CHECK(max_rel_diff(p.rr, ps.rr) < 1e-13);
    CHECK(max_rel_diff(p.rt, ps.rt) < 1e-13);
    CHECK(max_rel_diff(p.tt, ps.tt) < 1e-13);

    const auto c = kernels::cartesian_derivatives(g, p);
    const auto cs = kernels::serial::cartesian_derivatives(g, ps);
    CHECK(max_rel_diff(c.d1, cs.d1) < 1e-13);
    CHECK(max_rel_diff(c.d2, cs.d2) < 1e-13);
    CHECK(max_rel_diff(c.d11, cs.d11) < 1e-13);
    CHECK(max_rel_diff(c.d12, cs.d12) < 1e-13);
    CHECK(max_rel_diff(c.d22, cs.d22) < 1e-13);

    CHECK(max_rel_diff(kernels::minimal_surface_residual(c), kernels::serial::minimal_surface_residual(cs)) <
          1e-13);
  }
}

TEST_CASE("cartesian_to_polar reproduces the Laplacian") {
  // Δ = f_rr + f_r / r + f_θθ / r²
  for (double r : {0.5, 2.0, 7.0})
    for (double t : {-1.0, 0.0, 0.4}) {
      const auto c = kernels::cartesian_to_polar(1, 0, 1, 0, 0, r, t);
      CHECK(c.rr == doctest::Approx(1.0));
      CHECK(c.r == doctest::Approx(1 / r));
      CHECK(c.tt == doctest::Approx(1 / (r * r)));
      CHECK(std::abs(c.rt) < 1e-14);
      CHECK(std::abs(c.t) < 1e-14);
    }
}

TEST_CASE("cartesian_to_polar on first-order terms") {
  // ∂₁ = cos θ ∂_r - sin θ / r ∂_θ
  const double r = 3.0, t = 0.7;
  const auto c = kernels::cartesian_to_polar(0, 0, 0, 1, 0, r, t);
  CHECK(c.r == doctest::Approx(std::cos(t)));
  CHECK(c.t == doctest::Approx(-std::sin(t) / r));
  CHECK(c.rr == 0.0);
}
