#include "helicoid/kernels.hpp"

#include <cmath>

namespace helicoid::kernels::serial {

namespace {

// d/ds of a sampled line at index k (unit spacing), second order everywhere.
template <class Sample>
double d1(const Sample& v, int k, int n) {
  if (k == 0) return (-3.0 * v(0) + 4.0 * v(1) - v(2)) / 2.0;
  if (k == n - 1) return (3.0 * v(n - 1) - 4.0 * v(n - 2) + v(n - 3)) / 2.0;
  return (v(k + 1) - v(k - 1)) / 2.0;
}

template <class Sample>
double d2(const Sample& v, int k, int n) {
  if (n == 3) return v(0) - 2.0 * v(1) + v(2);
  if (k == 0) return 2.0 * v(0) - 5.0 * v(1) + 4.0 * v(2) - v(3);
  if (k == n - 1) return 2.0 * v(n - 1) - 5.0 * v(n - 2) + 4.0 * v(n - 3) - v(n - 4);
  return v(k + 1) - 2.0 * v(k) + v(k - 1);
}

}  // namespace

PolarDerivatives polar_derivatives(const WedgeGrid& grid, std::span<const double> f) {
  const int nr = grid.n_r();
  const int nt = grid.n_theta();
  const std::size_t n = grid.size();
  const double hx = grid.xi_step();
  const double ht = grid.theta_step();
  PolarDerivatives out{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
                       std::vector<double>(n), std::vector<double>(n)};

  for (int j = 0; j < nt; ++j) {
    for (int i = 0; i < nr; ++i) {
      auto along_r = [&](int jj) { return [&, jj](int ii) { return f[grid.index(ii, jj)]; }; };
      auto along_t = [&](int jj) { return f[grid.index(i, jj)]; };
      // ξ-derivative on neighbouring rows, then differentiated in θ
      auto fxi_row = [&](int jj) { return d1(along_r(jj), i, nr) / hx; };

      const double fx = d1(along_r(j), i, nr) / hx;
      const double fxx = d2(along_r(j), i, nr) / (hx * hx);
      const std::size_t k = grid.index(i, j);
      out.r[k] = grid.dr1(i) * fx;
      out.rr[k] = grid.dr2(i) * fxx + grid.dr2_lin(i) * fx;
      out.t[k] = d1(along_t, j, nt) / ht;
      out.tt[k] = d2(along_t, j, nt) / (ht * ht);
      out.rt[k] = grid.dr1(i) * d1(fxi_row, j, nt) / ht;
    }
  }
  return out;
}

CartesianDerivatives cartesian_derivatives(const WedgeGrid& grid, const PolarDerivatives& p) {
  const std::size_t n = grid.size();
  CartesianDerivatives d{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
                         std::vector<double>(n), std::vector<double>(n)};
  for (int j = 0; j < grid.n_theta(); ++j) {
    for (int i = 0; i < grid.n_r(); ++i) {
      const std::size_t k = grid.index(i, j);
      const double r = grid.r(i);
      const double th = grid.theta(j);
      const double c = std::cos(th), s = std::sin(th);
      // rows of the polar -> Cartesian Jacobian and its derivatives
      d.d1[k] = c * p.r[k] - s / r * p.t[k];
      d.d2[k] = s * p.r[k] + c / r * p.t[k];
      d.d11[k] = c * c * p.rr[k] - 2.0 * s * c / r * p.rt[k] + s * s / (r * r) * p.tt[k] +
                 s * s / r * p.r[k] + 2.0 * s * c / (r * r) * p.t[k];
      d.d22[k] = s * s * p.rr[k] + 2.0 * s * c / r * p.rt[k] + c * c / (r * r) * p.tt[k] +
                 c * c / r * p.r[k] - 2.0 * s * c / (r * r) * p.t[k];
      d.d12[k] = s * c * (p.rr[k] - p.r[k] / r - p.tt[k] / (r * r)) +
                 std::cos(2.0 * th) * (p.rt[k] / r - p.t[k] / (r * r));
    }
  }
  return d;
}

std::vector<double> minimal_surface_residual(const CartesianDerivatives& d) {
  std::vector<double> q(d.d1.size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    q[k] = (1.0 + d.d2[k] * d.d2[k]) * d.d11[k] + (1.0 + d.d1[k] * d.d1[k]) * d.d22[k] -
           2.0 * d.d1[k] * d.d2[k] * d.d12[k];
  }
  return q;
}

}  // namespace helicoid::kernels::serial
