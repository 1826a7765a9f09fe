#pragma once

#include "helicoid/geometry.hpp"
#include "helicoid/grid.hpp"

#include <optional>
#include <span>
#include <vector>

namespace helicoid {

// ---------------------------------------------------------------------------
// Barriers r^{∓β} cos(αθ)
// ---------------------------------------------------------------------------

enum class BarrierKind { decaying, growing };  // r^{-β} and r^{+β}

struct BarrierSpec {
  BarrierKind kind = BarrierKind::decaying;
  double beta = 0.5;
  double alpha = 0.9;
  double half_angle = 1.5707963267948966;

  // 0 < β < α < π/(2h): both barriers are positive on the closed wedge and
  // Δf = (β² - α²) r⁻² f is negative there.
  bool admissible() const;
};

// α defaults to the midpoint of (β, π/(2h)). Throws ValidationError unless
// 0 < β < π/(2h).
BarrierSpec make_barrier(BarrierKind kind, double beta, double half_angle,
                         std::optional<double> alpha = std::nullopt);

double barrier_value(const BarrierSpec& spec, double r, double theta);

struct BarrierCheck {
  double deviation;  // sup over interior nodes of |Δ_h f - (β² - α²) r⁻² f|
  bool sign_ok;      // (β² - α²) r⁻² f < 0 wherever f > 0
};

// Accepts the harmonic boundary case α = β as well; the sign check is then
// vacuous and reported as true.
BarrierCheck barrier_laplacian_check(const BarrierSpec& spec, const WedgeGrid& grid);

// ---------------------------------------------------------------------------
// Decay fitting
// ---------------------------------------------------------------------------

struct DecayFit {
  double beta_hat;   // minus the log-log slope
  double intercept;  // log-log intercept
  double r_lo, r_hi;
  double residual;   // RMS of the log-log residuals
  int levels;
};

// w = u - θ, the deviation of a wedge solution from the half-helicoid.
ScalarField helicoid_deviation(const ScalarField& u);

// Least-squares line through (log r, log sup) for the profile levels inside
// [r_lo, r_hi]. Needs at least five levels, all positive.
DecayFit fit_decay_exponent(std::span<const ProfileEntry> profile, double r_lo, double r_hi);

// ---------------------------------------------------------------------------
// Rescaling u_R(p) = u(Rp)/R
// ---------------------------------------------------------------------------

// Geometric grid on 1/2 ≤ r ≤ 2, |θ| ≤ 3h/2.
WedgeGrid reference_annulus(double half_angle, int n_r = 33, int n_theta = 37);

// Resamples w(Rp)/R onto `reference` by bilinear interpolation in (log r, θ).
// Throws DomainError with the admissible R range when w's grid does not
// cover the scaled annulus.
ScalarField rescale_field(const ScalarField& w, double R, const WedgeGrid& reference);
ScalarField rescale_field(const ScalarField& w, double R, double half_angle);

// ---------------------------------------------------------------------------
// Derivative decay on dyadic annuli
// ---------------------------------------------------------------------------

struct DyadicEntry {
  double R;  // annulus R ≤ r < 2R
  double first;
  double second;
};

struct DecaySequenceReport {
  std::vector<DyadicEntry> entries;
  double first_slope;   // log-log slope of the first sequence against R
  double second_slope;
  bool first_pass;
  bool second_pass;
  bool pass() const { return first_pass && second_pass; }
};

// sup over R ≤ r < 2R of r^{1+β}|Dw| and r^{2+β}|D²w| (Frobenius), for
// dyadic R = r_lo·2^k inside [r_lo, r_hi]. A sequence passes when it is
// finite and trends to zero: negative log-log slope and last < first.
// Identically zero sequences pass.
DecaySequenceReport derivative_decay_check(const ScalarField& w, double beta, double r_lo, double r_hi);

// Same with r^β|∂w/∂θ| and r^β|∂²w/∂θ²|.
DecaySequenceReport angular_derivative_decay(const ScalarField& w, double beta, double r_lo, double r_hi);

// ---------------------------------------------------------------------------
// Asymptotic helicoid of a multigraph sheet
// ---------------------------------------------------------------------------

struct AsymptoteFit {
  double pitch;
  double intercept;  // z ≈ pitch·θ + intercept
  double phase;      // intercept / pitch
  double beta_max;   // |pitch / t|·π
  double max_residual;            // sup |z - pitch·θ - intercept|
  std::optional<DecayFit> decay;  // per-bin decay of that residual; empty when it vanishes
  bool antisymmetry_checked;
  double antisymmetry_deviation;  // sup |f(r, θ) + f(r, -θ)|, f = z - pitch·θ
};

// Fits z ≈ pθ + c on the outer half (in log r) of the samples, then fits the
// decay of the residual over the bins below a tenth of the largest radius.
// Pairs (r, θ), (r, -θ) present in the samples are checked for antisymmetry.
AsymptoteFit helicoid_asymptote_fit(std::span<const CylPoint> samples, double lift);

}  // namespace helicoid
