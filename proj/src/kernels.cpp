#include "helicoid/kernels.hpp"

#include <array>
#include <cmath>

namespace helicoid::kernels {

namespace {

// Stencil weights (unscaled) for a line of n ≥ 3 samples at unit spacing.
struct Stencil {
  int offset;  // first sample index relative to the evaluation point
  int count;
  std::array<double, 4> w;
};

Stencil first_stencil(int k, int n) {
  if (k == 0) return {0, 3, {-1.5, 2.0, -0.5, 0.0}};
  if (k == n - 1) return {-2, 3, {0.5, -2.0, 1.5, 0.0}};
  return {-1, 3, {-0.5, 0.0, 0.5, 0.0}};
}

Stencil second_stencil(int k, int n) {
  if (n == 3) return {-k, 3, {1.0, -2.0, 1.0, 0.0}};
  if (k == 0) return {0, 4, {2.0, -5.0, 4.0, -1.0}};
  if (k == n - 1) return {-3, 4, {-1.0, 4.0, -5.0, 2.0}};
  return {-1, 3, {1.0, -2.0, 1.0, 0.0}};
}

// Applies stencil s along a strided line starting at `base`.
inline double apply(const Stencil& s, const double* base, int k, std::size_t stride) {
  double acc = 0.0;
  for (int m = 0; m < s.count; ++m) acc += s.w[m] * base[static_cast<std::size_t>(k + s.offset + m) * stride];
  return acc;
}

}  // namespace

PolarDerivatives polar_derivatives(const WedgeGrid& grid, std::span<const double> f) {
  const int nr = grid.n_r();
  const int nt = grid.n_theta();
  const std::size_t n = grid.size();
  const double hx = grid.xi_step();
  const double ht = grid.theta_step();

  std::vector<double> fx(n), fxx(n);
  PolarDerivatives out{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
                       std::vector<double>(n), std::vector<double>(n)};

  // radial sweeps, one θ-row per iteration
#pragma omp parallel for schedule(static)
  for (int j = 0; j < nt; ++j) {
    const double* row = f.data() + grid.index(0, j);
    for (int i = 0; i < nr; ++i) {
      const std::size_t k = grid.index(i, j);
      fx[k] = apply(first_stencil(i, nr), row, i, 1) / hx;
      fxx[k] = apply(second_stencil(i, nr), row, i, 1) / (hx * hx);
    }
  }

  // angular stencils, one θ-row per iteration; the neighbouring rows are
  // read contiguously in i
  const auto stride = static_cast<std::size_t>(nr);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < nt; ++j) {
    const Stencil s1 = first_stencil(j, nt);
    const Stencil s2 = second_stencil(j, nt);
    for (int i = 0; i < nr; ++i) {
      const std::size_t k = grid.index(i, j);
      const double d1 = grid.dr1(i);
      out.t[k] = apply(s1, f.data() + i, j, stride) / ht;
      out.tt[k] = apply(s2, f.data() + i, j, stride) / (ht * ht);
      out.rt[k] = d1 * apply(s1, fx.data() + i, j, stride) / ht;
      out.r[k] = d1 * fx[k];
      out.rr[k] = grid.dr2(i) * fxx[k] + grid.dr2_lin(i) * fx[k];
    }
  }
  return out;
}

CartesianDerivatives cartesian_derivatives(const WedgeGrid& grid, const PolarDerivatives& p) {
  const int nr = grid.n_r();
  const int nt = grid.n_theta();
  const std::size_t n = grid.size();
  CartesianDerivatives d{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
                         std::vector<double>(n), std::vector<double>(n)};
#pragma omp parallel for schedule(static)
  for (int j = 0; j < nt; ++j) {
    const double c = std::cos(grid.theta(j));
    const double s = std::sin(grid.theta(j));
    const double cc = c * c, ss = s * s, sc = s * c, c2 = cc - ss;
    for (int i = 0; i < nr; ++i) {
      const std::size_t k = grid.index(i, j);
      const double ir = 1.0 / grid.r(i);
      const double ir2 = ir * ir;
      const double fr = p.r[k], ft = p.t[k], frr = p.rr[k], frt = p.rt[k], ftt = p.tt[k];
      d.d1[k] = c * fr - s * ir * ft;
      d.d2[k] = s * fr + c * ir * ft;
      d.d11[k] = cc * frr - 2.0 * sc * ir * frt + ss * ir2 * ftt + ss * ir * fr + 2.0 * sc * ir2 * ft;
      d.d22[k] = ss * frr + 2.0 * sc * ir * frt + cc * ir2 * ftt + cc * ir * fr - 2.0 * sc * ir2 * ft;
      d.d12[k] = sc * frr + c2 * ir * frt - sc * ir2 * ftt - sc * ir * fr - c2 * ir2 * ft;
    }
  }
  return d;
}

std::vector<double> minimal_surface_residual(const CartesianDerivatives& d) {
  const std::size_t n = d.d1.size();
  std::vector<double> q(n);
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < n; ++k) {
    const double u1 = d.d1[k], u2 = d.d2[k];
    q[k] = (1.0 + u2 * u2) * d.d11[k] + (1.0 + u1 * u1) * d.d22[k] - 2.0 * u1 * u2 * d.d12[k];
  }
  return q;
}

PolarOperatorCoeffs cartesian_to_polar(double c11, double c12, double c22, double c1, double c2,
                                       double r, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double cc = c * c, ss = s * s, sc = s * c, cs2 = cc - ss;
  const double ir = 1.0 / r;
  const double ir2 = ir * ir;
  PolarOperatorCoeffs p;
  p.rr = c11 * cc + c22 * ss + c12 * sc;
  p.rt = ir * (-2.0 * sc * c11 + 2.0 * sc * c22 + cs2 * c12);
  p.tt = ir2 * (ss * c11 + cc * c22 - sc * c12);
  p.r = ir * (ss * c11 + cc * c22 - sc * c12) + c * c1 + s * c2;
  p.t = ir2 * (2.0 * sc * c11 - 2.0 * sc * c22 - cs2 * c12) + ir * (-s * c1 + c * c2);
  return p;
}

}  // namespace helicoid::kernels
