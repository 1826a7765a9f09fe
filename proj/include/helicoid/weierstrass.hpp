#pragma once

#include "helicoid/errors.hpp"
#include "helicoid/geometry.hpp"
#include "helicoid/trimesh.hpp"

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace helicoid {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Expressions in one complex variable
// ---------------------------------------------------------------------------

// Immutable expression tree over ζ built from constants, +, -, *, /,
// integer powers and exp. Derivatives are symbolic.
class Expr {
 public:
  enum class Op { constant, variable, add, sub, mul, div, pow, exp, neg };

  static Expr constant(Complex c);
  static Expr variable();

  Complex operator()(Complex z) const;
  Expr derivative() const;
  std::string str() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& a, int n);
  friend Expr exp(const Expr& a);

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Grammar: sums/products/quotients, unary minus, integer powers (^), exp(...),
// the variable z, the imaginary unit i, and real literals. "2i*z" is not
// accepted; write "2*i*z".
Expr parse_expr(const std::string& text);

// ---------------------------------------------------------------------------
// Weierstrass data
// ---------------------------------------------------------------------------

// dh = dh_coef(ζ) dζ.
struct WeierstrassData {
  Expr g;
  Expr dh_coef;
  std::string name;

  static WeierstrassData helicoid();  // g = e^ζ, dh = i dζ
  static WeierstrassData catenoid();  // g = ζ, dh = dζ/ζ
  static WeierstrassData plane(Complex g0 = Complex(0.5, 0.25));  // constant g, dh = dζ

  // Φ(ζ) with x = Re ∫ Φ dζ: (½(1/g - g), (i/2)(1/g + g), 1)·dh_coef.
  std::array<Complex, 3> phi(Complex z) const;
};

// Vertices of a parameter-domain mesh, with triangles.
struct ParamMesh {
  std::vector<Complex> points;
  std::vector<std::array<int, 3>> triangles;

  static ParamMesh rectangle(double u0, double u1, double v0, double v1, int nu, int nv);
  // ζ = ρ e^{it}, ρ ∈ [r0, r1] geometric, t around the full circle.
  static ParamMesh annulus(double r0, double r1, int n_r, int n_t);
};

struct Immersion {
  TriMesh mesh;
  std::vector<Complex> params;
  int base;
  double worst_period;  // largest closing error over non-tree edges
};

class PeriodError : public Error {
 public:
  PeriodError(const std::string& what, int a, int b, const Vec3& period)
      : Error(what), a_(a), b_(b), period_(period) {}
  int edge_from() const noexcept { return a_; }
  int edge_to() const noexcept { return b_; }
  const Vec3& period() const noexcept { return period_; }

 private:
  int a_, b_;
  Vec3 period_;
};

// x(ζ) = Re ∫_{base}^{ζ} Φ along a spanning tree of the mesh edges, each
// edge integrated by 8-point Gauss-Legendre. Every non-tree edge closes a
// loop whose real period must stay below rel_tol × loop length; otherwise
// PeriodError names the worst loop.
Immersion immerse(const WeierstrassData& data, const ParamMesh& domain, int base = 0, double rel_tol = 1e-8);

// k = 4|g'/g| / |dh| / (|g| + 1/|g|)². Throws DomainError where g or dh vanishes.
double principal_curvature(const WeierstrassData& data, Complex z);

// ---------------------------------------------------------------------------
// One-forms: residues and pole orders
// ---------------------------------------------------------------------------

using FormCoef = std::function<Complex(Complex)>;

// Coefficient of the form in the coordinate η = 1/ζ: c(1/η)·(-1/η²).
FormCoef at_infinity(FormCoef coef);

// (1/2πi) ∮ coef dζ over |ζ - center| = radius by the periodic trapezoid
// rule, doubling the node count until successive values agree.
Complex residue(const FormCoef& coef, Complex center, double radius);

struct PoleOrder {
  int order;         // 0 when regular
  double slope;      // d log max|coef| / d log radius
  double residual;   // RMS of the fit
};

// Fits log max_{|ζ-p|=ρ} |coef| against log ρ over the radii (at least four,
// spanning a decade). Throws Error("order indeterminate ...") when the slope
// is not close to an integer or the fit residual is large.
PoleOrder pole_order(const FormCoef& coef, Complex puncture, std::span<const double> radii);

// ---------------------------------------------------------------------------
// Mesh diagnostics
// ---------------------------------------------------------------------------

struct MeanCurvature {
  std::vector<double> values;  // NaN on boundary vertices
  std::vector<bool> interior;
  double sup;                  // over interior vertices
};

// |Σ (cot α + cot β)(x_i - x_j)| / (4 A_mixed) at interior vertices.
// Throws ValidationError listing degenerate triangles.
MeanCurvature mean_curvature(const TriMesh& mesh);

struct Registration {
  Eigen::Matrix3d Q;  // orthogonal; det -1 when reflected
  Vec3 t;
  bool reflected;
  double max_distance;  // over all vertices after alignment
  double rms_distance;
  double diameter;
  double relative() const { return max_distance / diameter; }
};

// Rigid (optionally reflecting) alignment x -> Qx + t of the mesh onto the
// helicoid: candidate frames from the principal axes, sampled rotations about
// the candidate axis, then Nelder-Mead on mean squared distance.
Registration register_to_helicoid(const TriMesh& mesh, const HelicoidSpec& spec, bool allow_reflection = true,
                                  int sample_count = 200);

// Number of ends of the level set {x₃ = c} toward a puncture: crossings of
// the level set with boundary edges whose endpoints are both flagged in
// `near_puncture`. A double pole of dh gives 2; a simple pole (catenoidal
// end, level sets closed near the puncture) gives 0.
int level_curve_ends(const TriMesh& mesh, double c, const std::vector<bool>& near_puncture);

}  // namespace helicoid
