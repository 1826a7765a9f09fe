#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace helicoid {

enum class RadialSpacing { uniform, geometric };

// ---------------------------------------------------------------------------
// WedgeGrid
// ---------------------------------------------------------------------------

// Tensor grid over the polar wedge {A ≤ r ≤ R_out, |θ| ≤ h}.
//
// Radial levels are uniform in the computational coordinate ξ, where ξ = r
// for uniform spacing and ξ = log r for geometric spacing (ratio
// q = (R_out/A)^(1/(n_r - 1))). The angular node count is odd, so θ = 0 is a
// grid line. Node (i, j) (radial i, angular j) is stored at j·n_r + i.
class WedgeGrid {
 public:
  WedgeGrid(double inner_radius, double outer_radius, double half_angle, int n_r, int n_theta,
            RadialSpacing spacing = RadialSpacing::uniform);

  double inner_radius() const noexcept { return radii_.front(); }
  double outer_radius() const noexcept { return radii_.back(); }
  double half_angle() const noexcept { return thetas_.back(); }
  int n_r() const noexcept { return static_cast<int>(radii_.size()); }
  int n_theta() const noexcept { return static_cast<int>(thetas_.size()); }
  RadialSpacing spacing() const noexcept { return spacing_; }
  std::size_t size() const noexcept { return radii_.size() * thetas_.size(); }

  std::span<const double> radii() const noexcept { return radii_; }
  std::span<const double> thetas() const noexcept { return thetas_; }
  double r(int i) const { return radii_[static_cast<std::size_t>(i)]; }
  double theta(int j) const { return thetas_[static_cast<std::size_t>(j)]; }
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * radii_.size() + static_cast<std::size_t>(i);
  }

  double xi_step() const noexcept { return xi_step_; }
  double theta_step() const noexcept { return theta_step_; }
  // Maps ξ-derivatives to r-derivatives at level i:
  //   f_r = dr1 · f_ξ,   f_rr = dr2 · f_ξξ + dr2_lin · f_ξ.
  double dr1(int i) const { return dr1_[static_cast<std::size_t>(i)]; }
  double dr2(int i) const { return dr2_[static_cast<std::size_t>(i)]; }
  double dr2_lin(int i) const { return dr2_lin_[static_cast<std::size_t>(i)]; }

  bool is_boundary(int i, int j) const noexcept {
    return i == 0 || j == 0 || i == n_r() - 1 || j == n_theta() - 1;
  }

  friend bool operator==(const WedgeGrid& a, const WedgeGrid& b) {
    return a.spacing_ == b.spacing_ && a.radii_ == b.radii_ && a.thetas_ == b.thetas_;
  }

 private:
  RadialSpacing spacing_;
  std::vector<double> radii_;
  std::vector<double> thetas_;
  double xi_step_;
  double theta_step_;
  std::vector<double> dr1_, dr2_, dr2_lin_;
};

WedgeGrid make_wedge_grid(double inner_radius, double outer_radius, double half_angle, int n_r,
                          int n_theta, RadialSpacing spacing = RadialSpacing::uniform);

// ---------------------------------------------------------------------------
// ScalarField
// ---------------------------------------------------------------------------

class ScalarField {
 public:
  ScalarField(WedgeGrid grid, std::vector<double> values);

  // Samples fn(r, θ) at every node.
  static ScalarField sample(const WedgeGrid& grid, const std::function<double(double, double)>& fn);
  static ScalarField constant(const WedgeGrid& grid, double value);

  const WedgeGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  double at(int i, int j) const { return values_[grid_.index(i, j)]; }

  ScalarField operator+(const ScalarField& o) const;
  ScalarField operator-(const ScalarField& o) const;
  ScalarField operator*(double s) const;

  double sup_abs() const;

 private:
  WedgeGrid grid_;
  std::vector<double> values_;
};

struct CartesianGradient {
  ScalarField d1;  // ∂/∂x₁
  ScalarField d2;  // ∂/∂x₂
};

struct CartesianHessian {
  ScalarField d11;
  ScalarField d12;
  ScalarField d22;
};

// Cartesian partials assembled from polar partials by the chain rule; centered
// differences in the interior, one-sided second-order stencils on the edges.
CartesianGradient fd_gradient(const ScalarField& f);
CartesianHessian fd_hessian(const ScalarField& f);

struct ProfileEntry {
  double r;
  double sup;  // max over θ of |f| at this radial level
};

std::vector<ProfileEntry> sup_profile(const ScalarField& f);

// CSV with header "r,theta,value", θ-major (r varies fastest), 17 significant digits.
void write_field_csv(std::ostream& out, const ScalarField& f);
// Inverse of write_field_csv. Reconstructs the grid (including its spacing rule)
// and rejects files whose coordinates do not match a WedgeGrid exactly.
ScalarField read_field_csv(std::istream& in);

}  // namespace helicoid
