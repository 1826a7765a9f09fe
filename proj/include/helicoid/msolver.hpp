#pragma once

#include "helicoid/grid.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace helicoid {

// Minimal surface operator Q(u) = (1 + u₂²)u₁₁ + (1 + u₁²)u₂₂ - 2u₁u₂u₁₂.
ScalarField q_residual(const ScalarField& u);

// Coefficients of the operator L annihilating w = u - v when u and v are both
// minimal graphs:
//   a11 = 1 + u₂²,  a22 = 1 + u₁²,  a12 = u₁u₂,
//   b1 = v₂₂(u₁ + v₁) - v₁₂(u₂ + v₂),
//   b2 = v₁₁(u₂ + v₂) - v₁₂(u₁ + v₁).
// The mixed term enters L with the sign it has in Q:
//   Lw = a11 w₁₁ + a22 w₂₂ - 2 a12 w₁₂ + b1 w₁ + b2 w₂,
// which makes Q(u) - Q(v) = L(u - v) an exact identity.
struct LinearOpCoeffs {
  std::vector<double> a11, a22, a12, b1, b2;

  // min over nodes of a11·a22 - a12² (equals 1 + |Du|² pointwise)
  double min_determinant() const;
};

LinearOpCoeffs assemble_linearization(const ScalarField& u, const ScalarField& v);

// L w with finite-difference derivatives of w on w's grid.
ScalarField apply_linearization(const LinearOpCoeffs& coeffs, const ScalarField& w);

// ---------------------------------------------------------------------------
// Dirichlet problem on a wedge
// ---------------------------------------------------------------------------

using AngularProfile = std::function<double(double theta)>;

struct DirichletData {
  AngularProfile inner;                      // u(A, θ)
  AngularProfile outer;                      // u(R_out, θ)
  std::function<double(double r, double theta)> ray;  // u(r, ±h)

  // Ray values u(r, ±h) = ±h, the half-helicoid's trace.
  static DirichletData helicoidal(AngularProfile inner, AngularProfile outer);
};

// Named boundary profiles accepted by configuration files and the CLI:
//   theta               u = θ
//   cos:<amp>[:<k>]     u = θ + amp·cos(kπθ/(2h)),  k odd (default 1)
//   sin:<amp>[:<k>]     u = θ + amp·sin(kπθ/h)      (default k = 1)
AngularProfile parse_profile(const std::string& text, double half_angle);

struct SolverConfig {
  double tol = 1e-10;          // sup-norm of Q on interior nodes
  int max_iters = 50;
  int max_halvings = 30;
};

struct SolveReport {
  int iterations = 0;              // Newton steps taken
  std::vector<double> residuals;   // sup |Q| before the first step and after each step
  bool converged = false;
  ScalarField field;
};

// Damped Newton iteration for Q(u) = 0 on the interior nodes with the
// boundary nodes fixed by `data`. The Jacobian is L_{u,u}, assembled as a
// sparse matrix on the 9-point polar stencil and factorized by sparse LU.
// Steps are halved while the residual fails to decrease. Returns
// converged = false when the budget runs out; throws Error on NaN.
SolveReport newton_solve(const WedgeGrid& grid, const DirichletData& data, const SolverConfig& cfg = {},
                         const std::optional<ScalarField>& initial = std::nullopt);

// Extends a wedge field on |θ| ≤ h to |θ| ≤ 2h by Schwarz reflection in the
// boundary rays: u(r, ±h + φ) = 2u(r, ±h) - u(r, ±h - φ). Requires 2h ≤ π.
ScalarField schwarz_extend(const ScalarField& u);

struct LaplacianDeviation {
  double R;
  double a_dev;  // sup over the reference annulus of max(|a11 - 1|, |a22 - 1|, |a12|)
  double b_dev;  // sup of max(|b1|, |b2|)
  double total() const { return a_dev + b_dev; }
};

// For each scale R, rescales u and v by p -> u(Rp)/R onto the reference
// annulus 1/2 ≤ r ≤ 2, |θ| ≤ 3h/2 (extending both fields by Schwarz
// reflection), assembles the linearized coefficients there, and measures
// their distance from the Laplacian. Throws DomainError listing the
// admissible range when an R is not covered.
std::vector<LaplacianDeviation> laplacian_limit_check(const ScalarField& u, const ScalarField& v,
                                                      std::span<const double> scales, int ref_n_r = 33,
                                                      int ref_n_theta = 37);

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct SolveProblem {
  WedgeGrid grid;
  DirichletData data;
  SolverConfig config;
  std::string inner_spec;
  std::string outer_spec;
};

// Builds a problem from key/value pairs (keys: tol, max_iters,
// damping_max_halvings, inner_bc, outer_bc, A, R_out, h, n_r, n_theta,
// spacing). Unknown keys are rejected. Defaults: A = 1, R_out = 64, h = π/2,
// 129 × 33 geometric nodes, inner_bc = cos:0.5, outer_bc = theta.
SolveProblem make_solve_problem(const std::vector<std::pair<std::string, std::string>>& entries);

// Reads "key = value" lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_key_values(std::istream& in);

}  // namespace helicoid
