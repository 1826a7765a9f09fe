#include "helicoid/errors.hpp"
#include "helicoid/trimesh.hpp"
#include "helicoid/weierstrass.hpp"

#include <doctest.h>

#include <Eigen/Geometry>

#include <cmath>

using namespace helicoid;

namespace {

const Complex I(0, 1);

bool close(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("expression parser") {
  const Complex z(0.3, -0.7);
  CHECK(close(parse_expr("z")(z), z, 1e-15));
  CHECK(close(parse_expr("exp(z)")(z), std::exp(z), 1e-15));
  CHECK(close(parse_expr("2*i*z")(z), 2.0 * I * z, 1e-15));
  CHECK(close(parse_expr("z^3 - 1/z")(z), z * z * z - 1.0 / z, 1e-14));
  CHECK(close(parse_expr("-(z + 2.5)^-2")(z), -1.0 / ((z + 2.5) * (z + 2.5)), 1e-14));
  CHECK(close(parse_expr("i")(z), I, 0));
  CHECK(close(parse_expr("exp(-z)/2 + 3*z*z")(z), std::exp(-z) / 2.0 + 3.0 * z * z, 1e-14));
  CHECK_THROWS_AS(parse_expr("2i*z"), ValidationError);
  CHECK_THROWS_AS(parse_expr("(z"), ValidationError);
  CHECK_THROWS_AS(parse_expr("sin(z)"), ValidationError);
  CHECK_THROWS_AS(parse_expr("z/0"), ValidationError);
  CHECK_THROWS_AS(parse_expr(""), ValidationError);
}

TEST_CASE("symbolic derivatives agree with complex differences") {
  const double e = 1e-5;
  for (const char* text : {"exp(z)", "z^3 - 1/z", "exp(2*z)*z^2", "(z + i)/(z - 3)", "exp(-z^2)"}) {
    const Expr f = parse_expr(text);
    const Expr df = f.derivative();
    for (Complex z : {Complex(0.4, 0.2), Complex(-1.1, 0.8)}) {
      const Complex fd = (f(z + e) - f(z - e)) / (2 * e);
      // holomorphic: the imaginary direction gives the same derivative
      const Complex fdi = (f(z + e * I) - f(z - e * I)) / (2 * e * I);
      INFO(text);
      CHECK(close(df(z), fd, 1e-8));
      CHECK(close(df(z), fdi, 1e-8));
    }
  }
}

TEST_CASE("Weierstrass data is isotropic") {
  // Φ₁² + Φ₂² + Φ₃² = 0 makes the immersion conformal
  for (const auto& d : {WeierstrassData::helicoid(), WeierstrassData::catenoid(), WeierstrassData::plane()})
    for (Complex z : {Complex(0.5, 0.1), Complex(-0.3, 2.0), Complex(1.7, -0.4)}) {
      const auto p = d.phi(z);
      CHECK(std::abs(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) < 1e-12 * (1 + std::norm(p[0]) + std::norm(p[1])));
    }
}

TEST_CASE("helicoid immersion matches the closed form") {
  // g = e^ζ, dh = i dζ gives x(u + iv) = (sinh u sin v, -sinh u cos v, -v)
  const auto dom = ParamMesh::rectangle(-1.5, 1.5, -2, 2, 21, 21);
  const auto im = immerse(WeierstrassData::helicoid(), dom, 0);
  const auto closed = [](Complex z) {
    return Vec3(std::sinh(z.real()) * std::sin(z.imag()), -std::sinh(z.real()) * std::cos(z.imag()), -z.imag());
  };
  const Vec3 base = closed(dom.points[0]);
  double worst = 0;
  for (std::size_t k = 0; k < dom.points.size(); ++k)
    worst = std::max(worst, (im.mesh.vertices[k] - (closed(dom.points[k]) - base)).norm());
  CHECK(worst < 1e-10);
  CHECK(im.worst_period < 1e-10);
}

TEST_CASE("catenoid immersion has height log |zeta|") {
  const auto dom = ParamMesh::annulus(0.5, 3, 9, 24);
  const auto im = immerse(WeierstrassData::catenoid(), dom, 0);
  const double z0 = std::log(std::abs(dom.points[0]));
  for (std::size_t k = 0; k < dom.points.size(); ++k)
    CHECK(im.mesh.vertices[k].z() == doctest::Approx(std::log(std::abs(dom.points[k])) - z0).epsilon(1e-10));
}

TEST_CASE("immersion detects periods") {
  // dh = i dζ/ζ has vertical period 2π around the origin
  WeierstrassData d{parse_expr("z"), parse_expr("i/z"), "twisted"};
  try {
    immerse(d, ParamMesh::annulus(0.5, 2, 5, 16));
    FAIL("period not detected");
  } catch (const PeriodError& e) {
    CHECK(e.period().norm() > 1.0);
  }
  CHECK_THROWS_AS(immerse(WeierstrassData::helicoid(), ParamMesh::rectangle(0, 1, 0, 1, 3, 3), 99), ValidationError);
}

TEST_CASE("mean curvature vanishes on immersed minimal surfaces") {
  const auto hel = immerse(WeierstrassData::helicoid(), ParamMesh::rectangle(-1.5, 1.5, -2, 2, 41, 41));
  CHECK(mean_curvature(hel.mesh).sup < 1e-2);
  const auto cat = immerse(WeierstrassData::catenoid(), ParamMesh::annulus(0.5, 2, 17, 48));
  CHECK(mean_curvature(cat.mesh).sup < 5e-2);
  const auto pl = immerse(WeierstrassData::plane(), ParamMesh::rectangle(-1, 1, -1, 1, 9, 9));
  CHECK(mean_curvature(pl.mesh).sup < 1e-10);
  const auto mc = mean_curvature(pl.mesh);
  CHECK(std::isnan(mc.values[0]));
  CHECK_FALSE(mc.interior[0]);
}

TEST_CASE("mean curvature of an icosphere") {
  const auto s = make_icosphere(2.0, 3);
  const auto mc = mean_curvature(s);
  for (std::size_t k = 0; k < s.vertex_count(); ++k) CHECK(mc.values[k] == doctest::Approx(0.5).epsilon(0.02));
  TriMesh bad = s;
  bad.vertices[bad.triangles[0][1]] = bad.vertices[bad.triangles[0][0]];
  CHECK_THROWS_AS(mean_curvature(bad), ValidationError);
}

TEST_CASE("principal curvature formula") {
  // helicoid: k = 1/cosh²u, and the point at ζ = u + iv sits at distance sinh u from the axis
  for (double r : {0.0, 1.0, 3.0}) {
    const Complex z(std::asinh(r), 0.3);
    CHECK(principal_curvature(WeierstrassData::helicoid(), z) == doctest::Approx(1 / (1 + r * r)).epsilon(1e-12));
  }
  // catenoid: k = 4/(|ζ| + 1/|ζ|)²
  CHECK(principal_curvature(WeierstrassData::catenoid(), Complex(0, 1)) == doctest::Approx(1.0));
  CHECK(principal_curvature(WeierstrassData::catenoid(), Complex(2, 0)) == doctest::Approx(4 / 6.25));
  CHECK(principal_curvature(WeierstrassData::plane(), Complex(0.2, 0.2)) == 0.0);
  CHECK_THROWS_AS(principal_curvature(WeierstrassData::catenoid(), Complex(0, 0)), DomainError);
}

TEST_CASE("residues") {
  CHECK(close(residue([](Complex z) { return 1.0 / z; }, 0, 1), 1.0, 1e-12));
  CHECK(close(residue([](Complex z) { return 3.0 / (z - 2.0) + 1.0 / (z * z); }, 2.0, 0.5), 3.0, 1e-12));
  CHECK(std::abs(residue([](Complex z) { return std::exp(z); }, 0, 1)) < 1e-12);
  // the helicoid's dh = i dζ and dg/g = dζ are residue-free at infinity; the catenoid's dh is not
  const auto dh_hel = at_infinity([](Complex) { return I; });
  CHECK(std::abs(residue(dh_hel, 0, 0.1)) < 1e-12);
  const auto dh_cat = at_infinity([](Complex z) { return 1.0 / z; });
  CHECK(close(residue(dh_cat, 0, 0.1), -1.0, 1e-12));
  // linearity
  const FormCoef f = [](Complex z) { return std::exp(z) / (z - 0.25); };
  const FormCoef g = [](Complex z) { return z / ((z + 0.1) * (z + 0.1)); };
  const Complex a(2, -1), b(0.5, 3);
  const Complex lhs = residue([&](Complex z) { return a * f(z) + b * g(z); }, 0, 1);
  CHECK(close(lhs, a * residue(f, 0, 1) + b * residue(g, 0, 1), 1e-11));
  CHECK(close(residue(f, 0, 1), std::exp(0.25), 1e-12));
  CHECK_THROWS_AS(residue(f, 0, 0.25), DomainError);
  CHECK_THROWS_AS(residue(f, 0, -1), ValidationError);
}

TEST_CASE("pole orders") {
  const double radii[] = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  CHECK(pole_order(at_infinity([](Complex) { return I; }), 0, radii).order == 2);
  CHECK(pole_order(at_infinity([](Complex) { return Complex(1); }), 0, radii).order == 2);
  CHECK(pole_order(at_infinity([](Complex z) { return 1.0 / z; }), 0, radii).order == 1);
  CHECK(pole_order([](Complex z) { return 1.0 / (z * z * z); }, 0, radii).order == 3);
  CHECK(pole_order([](Complex z) { return 1.0 + z; }, 0, radii).order == 0);
  CHECK(pole_order([](Complex z) { return z * z; }, 0, radii).order == 0);
  const auto p = pole_order([](Complex z) { return 1.0 / (z * z); }, 0, radii);
  CHECK(p.slope == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(p.residual < 1e-9);
  CHECK_THROWS_AS(pole_order([](Complex z) { return std::pow(z, -1.5); }, 0, radii), Error);
  CHECK_THROWS_AS(pole_order([](Complex) { return Complex(0); }, 0, radii), Error);
  const double few[] = {1e-1, 1e-2, 1e-3};
  CHECK_THROWS_AS(pole_order([](Complex z) { return 1.0 / z; }, 0, few), ValidationError);
  const double narrow[] = {1e-1, 0.09, 0.08, 0.07};
  CHECK_THROWS_AS(pole_order([](Complex z) { return 1.0 / z; }, 0, narrow), ValidationError);
}

TEST_CASE("registration recovers rigid images of the helicoid") {
  const auto H = HelicoidSpec::standard();
  const auto base = make_full_helicoid(H, 2, -2, 2, 17, 33);
  const Eigen::Matrix3d Q = Eigen::AngleAxisd(0.7, Vec3(1, 2, -0.5).normalized()).toRotationMatrix();
  const auto moved = transformed(base, Q, Vec3(0.3, -1.0, 0.4));
  const auto reg = register_to_helicoid(moved, H, false);
  CHECK_FALSE(reg.reflected);
  CHECK(reg.relative() < 1e-3);
  CHECK(std::abs(reg.Q.determinant() - 1) < 1e-9);

  Eigen::Matrix3d M = Eigen::Matrix3d::Identity();
  M(0, 0) = -1;
  const auto mirrored = transformed(base, M * Q);
  const auto with = register_to_helicoid(mirrored, H, true);
  CHECK(with.reflected);
  CHECK(with.relative() < 1e-3);
  CHECK(register_to_helicoid(mirrored, H, false).relative() > 1e-2);
}

TEST_CASE("level curve ends toward a puncture") {
  // helicoid on a ζ-annulus: the outer ring has x₃ = -Im ζ + const, crossing each level twice
  const auto dom = ParamMesh::annulus(0.5, 2, 9, 64);
  const auto hel = immerse(WeierstrassData::helicoid(), dom, 0);
  std::vector<bool> outer(dom.points.size()), inner(dom.points.size());
  for (std::size_t k = 0; k < dom.points.size(); ++k) {
    outer[k] = std::abs(std::abs(dom.points[k]) - 2) < 1e-9;
    inner[k] = std::abs(std::abs(dom.points[k]) - 0.5) < 1e-9;
  }
  const double z0 = hel.mesh.vertices[0].z() + dom.points[0].imag();  // x₃ = z0 - Im ζ
  CHECK(level_curve_ends(hel.mesh, z0 + 0.1, outer) == 2);
  // the catenoid's rings are level circles
  const auto cat = immerse(WeierstrassData::catenoid(), dom, 0);
  CHECK(level_curve_ends(cat.mesh, cat.mesh.vertices[0].z() + 0.05, inner) == 0);
  CHECK_THROWS_AS(level_curve_ends(cat.mesh, 0, std::vector<bool>(3)), ValidationError);
}
