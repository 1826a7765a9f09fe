#pragma once

// Data-parallel node kernels behind the grid and solver modules.
//
// Every kernel has an OpenMP implementation (namespace kernels) and a plain
// serial reference (namespace kernels::serial) written node-by-node. The two
// are kept independent so tests can check one against the other, and
// bench/ compares their throughput.

#include "helicoid/grid.hpp"

#include <span>
#include <vector>

namespace helicoid::kernels {

// Polar partials f_r, f_θ, f_rr, f_rθ, f_θθ (physical r, not ξ) at every node.
struct PolarDerivatives {
  std::vector<double> r, t, rr, rt, tt;
};

// Cartesian partials with respect to x₁ = r cos θ, x₂ = r sin θ.
struct CartesianDerivatives {
  std::vector<double> d1, d2, d11, d12, d22;
};

PolarDerivatives polar_derivatives(const WedgeGrid& grid, std::span<const double> f);
CartesianDerivatives cartesian_derivatives(const WedgeGrid& grid, const PolarDerivatives& p);
// Q(u) = (1 + u₂²)u₁₁ + (1 + u₁²)u₂₂ - 2u₁u₂u₁₂, pointwise.
std::vector<double> minimal_surface_residual(const CartesianDerivatives& d);

namespace serial {

PolarDerivatives polar_derivatives(const WedgeGrid& grid, std::span<const double> f);
CartesianDerivatives cartesian_derivatives(const WedgeGrid& grid, const PolarDerivatives& p);
std::vector<double> minimal_surface_residual(const CartesianDerivatives& d);

}  // namespace serial

// Coefficients of a second-order operator written in Cartesian derivatives,
//   c11 f₁₁ + c12 f₁₂ + c22 f₂₂ + c1 f₁ + c2 f₂,
// re-expressed on polar derivatives at the point (r, θ).
struct PolarOperatorCoeffs {
  double r = 0.0, t = 0.0, rr = 0.0, rt = 0.0, tt = 0.0;
};

PolarOperatorCoeffs cartesian_to_polar(double c11, double c12, double c22, double c1, double c2,
                                       double r, double theta);

}  // namespace helicoid::kernels
