#pragma once

#include "helicoid/grid.hpp"

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <numbers>

namespace helicoid {

using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Reduces an angle into [0, 2π).
double wrap_two_pi(double angle);

// ---------------------------------------------------------------------------
// HelicoidSpec
// ---------------------------------------------------------------------------

// Vertical helicoid with axis Z:
//   (r, θ) -> (r cos(θ + phase), r sin(θ + phase), pitch·θ),  r ∈ ℝ.
// Sign of the pitch gives the handedness.
class HelicoidSpec {
 public:
  HelicoidSpec(double pitch, double phase);

  // The standard helicoid H: pitch 1, phase 0.
  static HelicoidSpec standard() { return {1.0, 0.0}; }

  double pitch() const noexcept { return pitch_; }
  double phase() const noexcept { return phase_; }

  friend bool operator==(const HelicoidSpec&, const HelicoidSpec&) = default;

 private:
  double pitch_;
  double phase_;  // in [0, 2π)
};

// ---------------------------------------------------------------------------
// ScrewMotion
// ---------------------------------------------------------------------------

// Rotation about Z by `angle` combined with vertical translation by `lift`.
struct ScrewMotion {
  double angle = 0.0;
  double lift = 0.0;

  // Applying `*this` then `next` is the motion (angle + next.angle, lift + next.lift).
  ScrewMotion then(const ScrewMotion& next) const { return {angle + next.angle, lift + next.lift}; }
  ScrewMotion times(double k) const { return {k * angle, k * lift}; }
  ScrewMotion inverse() const { return {-angle, -lift}; }

  // σ_{2h}: rotation by 2h and lift by 2h.
  static ScrewMotion sigma(double two_h) { return {two_h, two_h}; }
};

// ---------------------------------------------------------------------------
// CylPoint
// ---------------------------------------------------------------------------

// Cylindrical coordinates with an unreduced (branch) angle.
struct CylPoint {
  double r = 0.0;
  double theta = 0.0;
  double z = 0.0;

  Vec3 cartesian() const;
};

Vec3 helicoid_point(const HelicoidSpec& spec, double r, double theta);

Vec3 apply_screw(const ScrewMotion& m, const Vec3& p);

// Index of the half-helicoid leaf through p: (atan2(y, x) - z/pitch) mod 2π.
// Constant along each leaf of the foliation of ℝ³ \ Z; throws DomainError on Z.
double leaf_parameter(const Vec3& p, const HelicoidSpec& spec);

HelicoidSpec rotate_helicoid(const HelicoidSpec& spec, double alpha);

// Euclidean distance from p to the full helicoid, certified to within `tol`.
//
// The radial parameter is eliminated in closed form, leaving the one-variable
// squared distance g(θ) = ρ² sin²(θ + phase - ψ) + (z - pitch·θ)², where
// (ρ, ψ) are the polar coordinates of p. Every minimizer lies in
// |θ - z/pitch| ≤ ρ/|pitch|. A branch-and-bound search over that interval
// uses two lower bounds per subinterval: the Lipschitz bound of √g
// (constant √(ρ² + pitch²)) and the interpolation bound of g
// (|g''| ≤ 2(ρ² + pitch²)). Throws ConvergenceError carrying the best upper
// bound when `max_evaluations` is exhausted.
double distance_to_helicoid(const Vec3& p, const HelicoidSpec& spec, double tol,
                            int max_evaluations = 1'000'000);

// F = θ - u on the graph z = u of a wedge field; F is constant on every
// half-helicoid, and vanishes identically for u = θ.
ScalarField angle_field_on_graph(const ScalarField& u);

}  // namespace helicoid
