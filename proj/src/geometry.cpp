#include "helicoid/geometry.hpp"

#include "helicoid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace helicoid {

double wrap_two_pi(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2π
  if (a >= kTwoPi) a = 0.0;
  return a;
}

HelicoidSpec::HelicoidSpec(double pitch, double phase) : pitch_(pitch), phase_(wrap_two_pi(phase)) {
  if (!(pitch != 0.0) || !std::isfinite(pitch)) throw ValidationError("pitch", "must be finite and nonzero");
  if (!std::isfinite(phase)) throw ValidationError("phase", "must be finite");
}

Vec3 CylPoint::cartesian() const { return {r * std::cos(theta), r * std::sin(theta), z}; }

Vec3 helicoid_point(const HelicoidSpec& spec, double r, double theta) {
  const double a = theta + spec.phase();
  return {r * std::cos(a), r * std::sin(a), spec.pitch() * theta};
}

Vec3 apply_screw(const ScrewMotion& m, const Vec3& p) {
  const double c = std::cos(m.angle);
  const double s = std::sin(m.angle);
  return {c * p.x() - s * p.y(), s * p.x() + c * p.y(), p.z() + m.lift};
}

double leaf_parameter(const Vec3& p, const HelicoidSpec& spec) {
  if (p.x() == 0.0 && p.y() == 0.0) throw DomainError("leaf_parameter: foliation undefined on Z");
  return wrap_two_pi(std::atan2(p.y(), p.x()) - p.z() / spec.pitch());
}

HelicoidSpec rotate_helicoid(const HelicoidSpec& spec, double alpha) {
  return {spec.pitch(), spec.phase() + alpha};
}

namespace {

struct Interval {
  double a, b;
  double ga, gb;  // squared distance at the endpoints
  double lower;   // certified lower bound of the distance on [a, b]
  bool operator>(const Interval& o) const { return lower > o.lower; }
};

}  // namespace

double distance_to_helicoid(const Vec3& p, const HelicoidSpec& spec, double tol, int max_evaluations) {
  if (!(tol > 0.0)) throw ValidationError("tol", "must be positive");
  const double pitch = spec.pitch();
  const double rho = std::hypot(p.x(), p.y());
  if (rho == 0.0) return 0.0;  // Z lies on every helicoid with axis Z
  const double psi = std::atan2(p.y(), p.x());
  const double shift = spec.phase() - psi;

  auto g = [&](double t) {
    const double s = rho * std::sin(t + shift);
    const double v = p.z() - pitch * t;
    return s * s + v * v;
  };
  const double lip = std::sqrt(rho * rho + pitch * pitch);  // Lipschitz constant of √g
  const double curv = 2.0 * (rho * rho + pitch * pitch);    // bound on |g''|

  auto lower_bound = [&](double a, double b, double ga, double gb) {
    const double w = b - a;
    const double lip_bound = 0.5 * (std::sqrt(ga) + std::sqrt(gb) - lip * w);
    const double quad = std::min(ga, gb) - curv * w * w / 8.0;
    return std::max({0.0, lip_bound, quad > 0.0 ? std::sqrt(quad) : 0.0});
  };

  const double center = p.z() / pitch;
  const double half_width = rho / std::abs(pitch);

  // coarse seeding: subintervals no wider than a quarter turn
  const int seeds = std::clamp(static_cast<int>(std::ceil(2.0 * half_width / (kPi / 8.0))), 8, 4096);
  std::priority_queue<Interval, std::vector<Interval>, std::greater<>> open;
  double best = std::numeric_limits<double>::infinity();
  int evaluations = 0;

  std::vector<double> knots(seeds + 1);
  std::vector<double> values(seeds + 1);
  for (int k = 0; k <= seeds; ++k) {
    knots[k] = center - half_width + 2.0 * half_width * k / seeds;
    values[k] = g(knots[k]);
    best = std::min(best, values[k]);
  }
  evaluations += seeds + 1;
  for (int k = 0; k < seeds; ++k) {
    open.push({knots[k], knots[k + 1], values[k], values[k + 1],
               lower_bound(knots[k], knots[k + 1], values[k], values[k + 1])});
  }

  while (!open.empty()) {
    const Interval top = open.top();
    const double best_distance = std::sqrt(best);
    if (best_distance - top.lower <= tol) return best_distance;
    if (evaluations >= max_evaluations) {
      throw ConvergenceError("distance_to_helicoid: evaluation budget exhausted", best_distance);
    }
    open.pop();
    const double mid = 0.5 * (top.a + top.b);
    const double gm = g(mid);
    ++evaluations;
    best = std::min(best, gm);
    const double cutoff = std::sqrt(best) - tol;
    const Interval left{top.a, mid, top.ga, gm, lower_bound(top.a, mid, top.ga, gm)};
    const Interval right{mid, top.b, gm, top.gb, lower_bound(mid, top.b, gm, top.gb)};
    if (left.lower < cutoff) open.push(left);
    if (right.lower < cutoff) open.push(right);
  }
  return std::sqrt(best);
}

ScalarField angle_field_on_graph(const ScalarField& u) {
  const WedgeGrid& grid = u.grid();
  std::vector<double> f(grid.size());
  for (int j = 0; j < grid.n_theta(); ++j) {
    for (int i = 0; i < grid.n_r(); ++i) {
      const auto k = grid.index(i, j);
      f[k] = grid.theta(j) - u[k];
    }
  }
  return {grid, std::move(f)};
}

}  // namespace helicoid
