#include "helicoid/curvature.hpp"

#include "helicoid/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace helicoid {

ParametricCurve::ParametricCurve(Evaluator jet, double t0, double t1) : jet_(std::move(jet)), t0_(t0), t1_(t1) {
  if (!(t1 > t0)) throw ValidationError("interval", "need t0 < t1");
}

ParametricCurve ParametricCurve::from_samples(std::vector<Vec3> points, double t0, double t1) {
  const int n = static_cast<int>(points.size());
  if (n < 6) throw ValidationError("samples", "need at least six samples");
  if (!(t1 > t0)) throw ValidationError("interval", "need t0 < t1");
  const double h = (t1 - t0) / (n - 1);

  // fourth-order stencils: centered in the interior, shifted near the ends
  static constexpr double d1c[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
  static constexpr double d2c[5] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
  static constexpr double d1f[2][5] = {{-25.0 / 12, 48.0 / 12, -36.0 / 12, 16.0 / 12, -3.0 / 12},
                                       {-3.0 / 12, -10.0 / 12, 18.0 / 12, -6.0 / 12, 1.0 / 12}};
  // second derivative needs six points for fourth order one-sided
  static constexpr double d2f[2][6] = {
      {45.0 / 12, -154.0 / 12, 214.0 / 12, -156.0 / 12, 61.0 / 12, -10.0 / 12},
      {10.0 / 12, -15.0 / 12, -4.0 / 12, 14.0 / 12, -6.0 / 12, 1.0 / 12}};

  std::vector<Vec3> d1(n, Vec3::Zero()), d2(n, Vec3::Zero());
  for (int k = 0; k < n; ++k) {
    if (k >= 2 && k <= n - 3) {
      for (int m = 0; m < 5; ++m) {
        d1[k] += d1c[m] * points[k - 2 + m];
        d2[k] += d2c[m] * points[k - 2 + m];
      }
      continue;
    }
    const bool left = k < 2;
    const int e = left ? k : n - 1 - k;  // distance from the end
    const double sign = left ? 1.0 : -1.0;
    auto at = [&](int m) -> const Vec3& { return left ? points[m] : points[n - 1 - m]; };
    for (int m = 0; m < 5; ++m) d1[k] += sign * d1f[e][m] * at(m);
    for (int m = 0; m < 6; ++m) d2[k] += d2f[e][m] * at(m);
  }
  for (int k = 0; k < n; ++k) {
    d1[k] /= h;
    d2[k] /= h * h;
  }

  auto jet = [pts = std::move(points), d1 = std::move(d1), d2 = std::move(d2), t0, h, n](double t) {
    const double s = (t - t0) / h;
    const int base = std::clamp(static_cast<int>(std::floor(s)) - 1, 0, n - 4);
    std::array<double, 4> w{};
    for (int a = 0; a < 4; ++a) {
      double l = 1.0;
      for (int b = 0; b < 4; ++b)
        if (b != a) l *= (s - (base + b)) / static_cast<double>(a - b);
      w[a] = l;
    }
    CurveJet out{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    for (int a = 0; a < 4; ++a) {
      out.c += w[a] * pts[base + a];
      out.d1 += w[a] * d1[base + a];
      out.d2 += w[a] * d2[base + a];
    }
    return out;
  };
  return {std::move(jet), t0, t1};
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

namespace {

struct Simpson {
  const std::function<double(double)>& f;

  double run(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return run(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + run(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }
};

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  constexpr int panels = 16;
  const double w = (b - a) / panels;
  double sum = 0.0;
  Simpson s{f};
  for (int k = 0; k < panels; ++k) {
    const double pa = a + k * w;
    const double pb = k == panels - 1 ? b : pa + w;
    const double fa = f(pa), fm = f(0.5 * (pa + pb)), fb = f(pb);
    const double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
    sum += s.run(pa, pb, fa, fm, fb, whole, tol / panels, 40);
  }
  return sum;
}

}  // namespace

double total_curvature(const ParametricCurve& c, double tol) {
  if (!(tol > 0.0)) throw ValidationError("tol", "must be positive");
  const std::function<double(double)> integrand = [&c](double t) {
    const CurveJet j = c.jet(t);
    const double speed2 = j.d1.squaredNorm();
    if (!(speed2 > 1e-24 * std::max(1.0, j.c.squaredNorm()))) {
      std::ostringstream msg;
      msg << "irregular curve: |c'| vanishes at theta = " << t;
      throw DomainError(msg.str());
    }
    return j.d1.cross(j.d2).norm() / speed2;
  };
  return adaptive_simpson(integrand, c.t0(), c.t1(), tol);
}

// ---------------------------------------------------------------------------
// Almost-helical curves
// ---------------------------------------------------------------------------

Perturbation Perturbation::zero() { return constant(0.0); }

Perturbation Perturbation::constant(double value) {
  return {[value](double, double) { return value; }, [](double, double) { return 0.0; },
          [](double, double) { return 0.0; }};
}

Perturbation Perturbation::power_cos(double amp, double p) {
  return {[=](double r, double t) { return amp * std::pow(r, -p) * std::cos(t); },
          [=](double r, double t) { return -amp * std::pow(r, -p) * std::sin(t); },
          [=](double r, double t) { return -amp * std::pow(r, -p) * std::cos(t); }};
}

Perturbation Perturbation::power_sin(double amp, double p) {
  return {[=](double r, double t) { return amp * std::pow(r, -p) * std::sin(t); },
          [=](double r, double t) { return amp * std::pow(r, -p) * std::cos(t); },
          [=](double r, double t) { return -amp * std::pow(r, -p) * std::sin(t); }};
}

Perturbation parse_perturbation(const std::string& text) {
  if (text == "zero") return Perturbation::zero();
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  std::vector<double> nums;
  try {
    for (std::size_t k = 1; k < parts.size(); ++k) {
      std::size_t used = 0;
      nums.push_back(std::stod(parts[k], &used));
      if (used != parts[k].size()) throw std::invalid_argument(parts[k]);
    }
  } catch (const std::exception&) {
    throw ValidationError("perturbation", "bad number in '" + text + "'");
  }
  if (!parts.empty() && parts[0] == "const" && nums.size() == 1) return Perturbation::constant(nums[0]);
  if (!parts.empty() && parts[0] == "cos" && nums.size() == 2) return Perturbation::power_cos(nums[0], nums[1]);
  if (!parts.empty() && parts[0] == "sin" && nums.size() == 2) return Perturbation::power_sin(nums[0], nums[1]);
  throw ValidationError("perturbation", "unrecognized perturbation '" + text + "'");
}

ParametricCurve almost_helical_curve(double r, const Perturbation& f, double t0, double t1) {
  if (!(r > 0.0)) throw ValidationError("r", "must be positive");
  return {[r, f](double t) {
            const double c = std::cos(t), s = std::sin(t);
            return CurveJet{Vec3(r * c, r * s, t + f.f(r, t)), Vec3(-r * s, r * c, 1.0 + f.f_t(r, t)),
                            Vec3(-r * c, -r * s, f.f_tt(r, t))};
          },
          t0, t1};
}

double helix_total_curvature(double r, double angle) { return angle * r / std::sqrt(r * r + 1.0); }

std::vector<ArcMarginRow> arc_margin_check(const Perturbation& f, double angle, std::span<const double> radii,
                                      double tol) {
  if (!(angle > 0.0)) throw ValidationError("A", "interval length must be positive");
  std::vector<ArcMarginRow> rows(radii.size());
  std::vector<std::exception_ptr> failures(radii.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < radii.size(); ++k) {
    try {
      const double total = total_curvature(almost_helical_curve(radii[k], f, 0.0, angle), tol);
      rows[k] = {radii[k], total, angle - total, angle - total > 0.0};
    } catch (...) {
      failures[k] = std::current_exception();
    }
  }
  // rethrow the failure at the smallest index so the error is deterministic
  for (const auto& e : failures)
    if (e) std::rethrow_exception(e);
  return rows;
}

double arc_margin_threshold(std::span<const ArcMarginRow> rows) {
  std::vector<ArcMarginRow> sorted(rows.begin(), rows.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.r < b.r; });
  double threshold = std::numeric_limits<double>::quiet_NaN();
  for (auto it = sorted.rbegin(); it != sorted.rend() && it->pass; ++it) threshold = it->r;
  return threshold;
}

// ---------------------------------------------------------------------------
// Boundary gate
// ---------------------------------------------------------------------------

namespace {

double exterior_angle(const Vec3& incoming, const Vec3& outgoing) {
  const double c = incoming.normalized().dot(outgoing.normalized());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace

CurvatureReport boundary_gate(double h, double R, const Perturbation& f, double tol) {
  if (!(h > 0.0)) throw ValidationError("h", "half-angle must be positive");
  if (h > std::numbers::pi / 2.0 + 1e-15) throw ValidationError("h", "budget exceeds 4π hypothesis");
  if (!(R > 0.0)) throw ValidationError("R", "must be positive");

  const ParametricCurve arc = almost_helical_curve(R, f, -h, h);
  const auto rot = [](const Vec3& v) { return Vec3(-v.x(), -v.y(), v.z()); };
  const ParametricCurve image([&arc, rot](double t) {
                                const CurveJet j = arc.jet(t);
                                return CurveJet{rot(j.c), rot(j.d1), rot(j.d2)};
                              },
                              -h, h);

  const CurveJet a0 = arc.jet(-h), a1 = arc.jet(h);
  const CurveJet b0 = image.jet(-h), b1 = image.jet(h);

  CurvatureReport rep;
  rep.segments = {{"arc", total_curvature(arc, tol)},
                  {"top diameter", 0.0},
                  {"rotated arc", total_curvature(image, tol)},
                  {"bottom diameter", 0.0}};
  // traverse: arc forward, top diameter a1 -> b1, rotated arc backward, bottom diameter b0 -> a0
  const Vec3 top = b1.c - a1.c;
  const Vec3 bottom = a0.c - b0.c;
  rep.corners = {exterior_angle(a1.d1, top), exterior_angle(top, -b1.d1), exterior_angle(-b0.d1, bottom),
                 exterior_angle(bottom, a0.d1)};
  rep.total = 0.0;
  for (const auto& s : rep.segments) rep.total += s.total;
  for (double c : rep.corners) rep.total += c;
  rep.budget = 4.0 * h + 2.0 * std::numbers::pi;
  rep.pass = rep.total < 4.0 * std::numbers::pi;
  return rep;
}

void write_curve_csv(std::ostream& out, const ParametricCurve& c, int n) {
  if (n < 2) throw ValidationError("n", "need at least two points");
  out << "theta,x,y,z\n";
  char buf[128];
  for (int k = 0; k < n; ++k) {
    const double t = k == n - 1 ? c.t1() : c.t0() + (c.t1() - c.t0()) * k / (n - 1);
    const Vec3 p = c.jet(t).c;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", t, p.x(), p.y(), p.z());
    out << buf;
  }
}

}  // namespace helicoid
