#include "helicoid/grid.hpp"

#include "helicoid/errors.hpp"
#include "helicoid/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace helicoid {

// ---------------------------------------------------------------------------
// WedgeGrid
// ---------------------------------------------------------------------------

WedgeGrid::WedgeGrid(double inner_radius, double outer_radius, double half_angle, int n_r,
                     int n_theta, RadialSpacing spacing)
    : spacing_(spacing) {
  if (!(inner_radius > 0.0) || !std::isfinite(inner_radius))
    throw ValidationError("A", "inner radius must be positive");
  if (!(outer_radius > inner_radius) || !std::isfinite(outer_radius))
    throw ValidationError("R_out", "outer radius must exceed the inner radius");
  if (!(half_angle > 0.0) || half_angle > std::numbers::pi)
    throw ValidationError("h", "half-angle must lie in (0, pi]");
  if (n_r < 3) throw ValidationError("n_r", "need at least 3 radial levels");
  if (n_theta < 3) throw ValidationError("n_theta", "need at least 3 angular levels");
  if (n_theta % 2 == 0) throw ValidationError("n_theta", "must be odd so that theta = 0 is a grid line");

  radii_.resize(static_cast<std::size_t>(n_r));
  thetas_.resize(static_cast<std::size_t>(n_theta));
  dr1_.resize(radii_.size());
  dr2_.resize(radii_.size());
  dr2_lin_.resize(radii_.size());

  if (spacing == RadialSpacing::uniform) {
    xi_step_ = (outer_radius - inner_radius) / (n_r - 1);
    for (int i = 0; i < n_r; ++i) radii_[i] = inner_radius + i * xi_step_;
  } else {
    xi_step_ = std::log(outer_radius / inner_radius) / (n_r - 1);
    for (int i = 0; i < n_r; ++i) radii_[i] = inner_radius * std::exp(i * xi_step_);
  }
  radii_.front() = inner_radius;
  radii_.back() = outer_radius;

  theta_step_ = 2.0 * half_angle / (n_theta - 1);
  for (int j = 0; j < n_theta; ++j) thetas_[j] = -half_angle + j * theta_step_;
  thetas_.front() = -half_angle;
  thetas_.back() = half_angle;
  thetas_[static_cast<std::size_t>(n_theta / 2)] = 0.0;

  for (int i = 0; i < n_r; ++i) {
    if (spacing == RadialSpacing::uniform) {
      dr1_[i] = 1.0;
      dr2_[i] = 1.0;
      dr2_lin_[i] = 0.0;
    } else {
      // ξ = log r:  f_r = f_ξ / r,  f_rr = (f_ξξ - f_ξ) / r²
      const double r = radii_[i];
      dr1_[i] = 1.0 / r;
      dr2_[i] = 1.0 / (r * r);
      dr2_lin_[i] = -1.0 / (r * r);
    }
  }
}

WedgeGrid make_wedge_grid(double inner_radius, double outer_radius, double half_angle, int n_r,
                          int n_theta, RadialSpacing spacing) {
  return {inner_radius, outer_radius, half_angle, n_r, n_theta, spacing};
}

// ---------------------------------------------------------------------------
// ScalarField
// ---------------------------------------------------------------------------

ScalarField::ScalarField(WedgeGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw ValidationError("values", "count must equal the grid node count");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) throw ValidationError("values", "non-finite value at node " + std::to_string(k));
  }
}

ScalarField ScalarField::sample(const WedgeGrid& grid, const std::function<double(double, double)>& fn) {
  std::vector<double> v(grid.size());
  for (int j = 0; j < grid.n_theta(); ++j)
    for (int i = 0; i < grid.n_r(); ++i) v[grid.index(i, j)] = fn(grid.r(i), grid.theta(j));
  return {grid, std::move(v)};
}

ScalarField ScalarField::constant(const WedgeGrid& grid, double value) {
  return {grid, std::vector<double>(grid.size(), value)};
}

namespace {

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) throw DomainError("scalar fields live on different grids");
}

}  // namespace

ScalarField ScalarField::operator+(const ScalarField& o) const {
  require_same_grid(*this, o);
  std::vector<double> v(values_);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] += o.values_[k];
  return {grid_, std::move(v)};
}

ScalarField ScalarField::operator-(const ScalarField& o) const {
  require_same_grid(*this, o);
  std::vector<double> v(values_);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] -= o.values_[k];
  return {grid_, std::move(v)};
}

ScalarField ScalarField::operator*(double s) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= s;
  return {grid_, std::move(v)};
}

double ScalarField::sup_abs() const {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::abs(x));
  return m;
}

// ---------------------------------------------------------------------------
// Derivatives
// ---------------------------------------------------------------------------

CartesianGradient fd_gradient(const ScalarField& f) {
  const auto polar = kernels::polar_derivatives(f.grid(), f.values());
  auto cart = kernels::cartesian_derivatives(f.grid(), polar);
  return {ScalarField(f.grid(), std::move(cart.d1)), ScalarField(f.grid(), std::move(cart.d2))};
}

CartesianHessian fd_hessian(const ScalarField& f) {
  const auto polar = kernels::polar_derivatives(f.grid(), f.values());
  auto cart = kernels::cartesian_derivatives(f.grid(), polar);
  return {ScalarField(f.grid(), std::move(cart.d11)), ScalarField(f.grid(), std::move(cart.d12)),
          ScalarField(f.grid(), std::move(cart.d22))};
}

std::vector<ProfileEntry> sup_profile(const ScalarField& f) {
  const WedgeGrid& g = f.grid();
  std::vector<ProfileEntry> out;
  out.reserve(static_cast<std::size_t>(g.n_r()));
  for (int i = 0; i < g.n_r(); ++i) {
    double m = 0.0;
    for (int j = 0; j < g.n_theta(); ++j) m = std::max(m, std::abs(f.at(i, j)));
    out.push_back({g.r(i), m});
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {

std::string format17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ValidationError("csv", "malformed number on line " + std::to_string(line));
  return v;
}

}  // namespace

void write_field_csv(std::ostream& out, const ScalarField& f) {
  const WedgeGrid& g = f.grid();
  out << "r,theta,value\n";
  for (int j = 0; j < g.n_theta(); ++j) {
    for (int i = 0; i < g.n_r(); ++i) {
      out << format17(g.r(i)) << ',' << format17(g.theta(j)) << ',' << format17(f.at(i, j)) << '\n';
    }
  }
}

ScalarField read_field_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("csv", "empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "r,theta,value") throw ValidationError("csv", "expected header 'r,theta,value'");

  std::vector<double> rs, ts, vs;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw ValidationError("csv", "expected three columns on line " + std::to_string(lineno));
    const std::string_view sv(line);
    rs.push_back(parse_double(sv.substr(0, c1), lineno));
    ts.push_back(parse_double(sv.substr(c1 + 1, c2 - c1 - 1), lineno));
    vs.push_back(parse_double(sv.substr(c2 + 1), lineno));
  }
  if (rs.empty()) throw ValidationError("csv", "no data rows");

  // r varies fastest: the first row block fixes n_r
  std::size_t n_r = 1;
  while (n_r < ts.size() && ts[n_r] == ts[0]) ++n_r;
  if (rs.size() % n_r != 0) throw ValidationError("csv", "row count is not a multiple of the radial level count");
  const std::size_t n_t = rs.size() / n_r;

  const double a = rs.front();
  const double rout = rs[n_r - 1];
  const double h = ts.back();
  for (RadialSpacing sp : {RadialSpacing::uniform, RadialSpacing::geometric}) {
    WedgeGrid g(a, rout, h, static_cast<int>(n_r), static_cast<int>(n_t), sp);
    bool match = true;
    for (int j = 0; j < g.n_theta() && match; ++j) {
      for (int i = 0; i < g.n_r(); ++i) {
        const std::size_t k = g.index(i, j);
        if (rs[k] != g.r(i) || ts[k] != g.theta(j)) {
          match = false;
          break;
        }
      }
    }
    if (match) return {g, std::move(vs)};
  }
  throw ValidationError("csv", "coordinates do not form a uniform or geometric wedge grid");
}

}  // namespace helicoid
