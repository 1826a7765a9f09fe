#pragma once

#include "helicoid/geometry.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace helicoid {

struct CurveJet {
  Vec3 c, d1, d2;  // c(θ), c′(θ), c″(θ)
};

class ParametricCurve {
 public:
  using Evaluator = std::function<CurveJet(double)>;

  // Analytic curve; `jet` must return exact derivatives.
  ParametricCurve(Evaluator jet, double t0, double t1);

  // Curve through points sampled at uniformly spaced parameters on [t0, t1]
  // (at least 6). Derivatives come from fourth-order differences at the
  // samples; values between samples are cubic Lagrange interpolants.
  static ParametricCurve from_samples(std::vector<Vec3> points, double t0, double t1);

  CurveJet jet(double t) const { return jet_(t); }
  double t0() const noexcept { return t0_; }
  double t1() const noexcept { return t1_; }

 private:
  Evaluator jet_;
  double t0_, t1_;
};

// ∫ |c′ × c″| / |c′|² dθ by adaptive Simpson to absolute tolerance `tol`.
// Throws DomainError naming the parameter where |c′| vanishes.
double total_curvature(const ParametricCurve& c, double tol = 1e-10);

// f(r, θ) with its first two θ-derivatives.
struct Perturbation {
  std::function<double(double, double)> f, f_t, f_tt;

  static Perturbation zero();
  static Perturbation constant(double value);
  // amp · r^{-p} · cos θ  and  amp · r^{-p} · sin θ
  static Perturbation power_cos(double amp, double p);
  static Perturbation power_sin(double amp, double p);
};

// "zero", "const:<c>", "cos:<amp>:<p>" or "sin:<amp>:<p>" (the power_* families).
// Throws ValidationError otherwise.
Perturbation parse_perturbation(const std::string& text);

// c(θ) = (r cos θ, r sin θ, θ + f(r, θ)) on [t0, t1].
ParametricCurve almost_helical_curve(double r, const Perturbation& f, double t0, double t1);

// Closed form for the unperturbed helix over an angle A: A·r/√(r² + 1).
double helix_total_curvature(double r, double angle);

struct ArcMarginRow {
  double r;
  double total;
  double margin;  // A - total
  bool pass;      // margin > 0
};

// Total curvature of the almost-helical arc over [0, A] for each r.
std::vector<ArcMarginRow> arc_margin_check(const Perturbation& f, double angle, std::span<const double> radii,
                                      double tol = 1e-12);

// Smallest listed radius from which every larger listed radius passes; NaN if none.
double arc_margin_threshold(std::span<const ArcMarginRow> rows);

struct CurveSegment {
  std::string name;
  double total;
};

struct CurvatureReport {
  double total;
  std::vector<CurveSegment> segments;
  std::vector<double> corners;  // exterior angles
  double budget;                // 4h + 2π
  bool pass;                    // total < 4π
};

// Boundary of the helicoidal piece inside the cylinder r ≤ R between the
// levels of θ = ±h: the arc θ ∈ [-h, h] on r = R, its image under rotation
// by π about the axis, and the two diameters joining their endpoints.
// Corner angles are measured from the adjoining tangents.
// Throws ValidationError for h outside (0, π/2].
CurvatureReport boundary_gate(double h, double R, const Perturbation& f = Perturbation::zero(),
                              double tol = 1e-12);

// CSV "theta,x,y,z" at n uniformly spaced parameters.
void write_curve_csv(std::ostream& out, const ParametricCurve& c, int n);

}  // namespace helicoid
