#include "helicoid/asymptotics.hpp"

#include "helicoid/errors.hpp"
#include "helicoid/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace helicoid {

namespace {

struct LineFit {
  double slope, intercept, rms;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  const double slope = sxy / sxx;
  const double icpt = my - slope * mx;
  double ss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double e = y[k] - (slope * x[k] + icpt);
    ss += e * e;
  }
  return {slope, icpt, std::sqrt(ss / n)};
}

bool in_window(double r, double lo, double hi) {
  return r >= lo * (1.0 - 1e-12) && r <= hi * (1.0 + 1e-12);
}

}  // namespace

// ---------------------------------------------------------------------------
// Barriers
// ---------------------------------------------------------------------------

bool BarrierSpec::admissible() const {
  return beta > 0.0 && beta < alpha && alpha < std::numbers::pi / (2.0 * half_angle);
}

BarrierSpec make_barrier(BarrierKind kind, double beta, double half_angle, std::optional<double> alpha) {
  if (!(half_angle > 0.0) || half_angle > std::numbers::pi) throw ValidationError("h", "half-angle must lie in (0, pi]");
  const double cap = std::numbers::pi / (2.0 * half_angle);
  if (!(beta > 0.0) || !(beta < cap)) throw ValidationError("beta", "need 0 < beta < pi/(2h)");
  BarrierSpec s{kind, beta, alpha.value_or(0.5 * (beta + cap)), half_angle};
  if (!s.admissible()) throw ValidationError("alpha", "need beta < alpha < pi/(2h)");
  return s;
}

double barrier_value(const BarrierSpec& spec, double r, double theta) {
  if (!(r > 0.0)) throw DomainError("barrier_value: r must be positive");
  const double e = spec.kind == BarrierKind::decaying ? -spec.beta : spec.beta;
  return std::pow(r, e) * std::cos(spec.alpha * theta);
}

BarrierCheck barrier_laplacian_check(const BarrierSpec& spec, const WedgeGrid& grid) {
  if (!(spec.beta > 0.0) || spec.alpha < spec.beta)
    throw ValidationError("alpha", "need 0 < beta <= alpha");
  if (std::abs(grid.half_angle() - spec.half_angle) > 1e-12)
    throw ValidationError("h", "barrier half-angle differs from the grid's");
  const ScalarField f = ScalarField::sample(grid, [&](double r, double t) { return barrier_value(spec, r, t); });
  const CartesianHessian hess = fd_hessian(f);
  const double k = spec.beta * spec.beta - spec.alpha * spec.alpha;
  BarrierCheck out{0.0, true};
  for (int j = 1; j < grid.n_theta() - 1; ++j) {
    for (int i = 1; i < grid.n_r() - 1; ++i) {
      const std::size_t n = grid.index(i, j);
      const double r = grid.r(i);
      const double target = k * f[n] / (r * r);
      out.deviation = std::max(out.deviation, std::abs(hess.d11[n] + hess.d22[n] - target));
    }
  }
  if (spec.alpha > spec.beta) {
    for (int j = 0; j < grid.n_theta(); ++j)
      for (int i = 0; i < grid.n_r(); ++i) {
        const double fv = f.at(i, j);
        if (fv > 0.0 && !(k * fv / (grid.r(i) * grid.r(i)) < 0.0)) out.sign_ok = false;
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Decay fitting
// ---------------------------------------------------------------------------

ScalarField helicoid_deviation(const ScalarField& u) {
  return u - ScalarField::sample(u.grid(), [](double, double t) { return t; });
}

DecayFit fit_decay_exponent(std::span<const ProfileEntry> profile, double r_lo, double r_hi) {
  if (profile.empty()) throw ValidationError("profile", "empty profile");
  if (!(r_lo > 0.0) || !(r_hi > r_lo)) throw ValidationError("window", "need 0 < r_lo < r_hi");
  if (!in_window(r_lo, profile.front().r, profile.back().r) || !in_window(r_hi, profile.front().r, profile.back().r))
    throw ValidationError("window", "window must lie inside the profile's radial range");
  std::vector<double> x, y;
  for (std::size_t k = 0; k < profile.size(); ++k) {
    const auto& e = profile[k];
    if (!in_window(e.r, r_lo, r_hi)) continue;
    if (!(e.sup > 0.0)) {
      std::ostringstream msg;
      msg << "nonpositive value " << e.sup << " at level " << k << " (r = " << e.r << ")";
      throw ValidationError("profile", msg.str());
    }
    x.push_back(std::log(e.r));
    y.push_back(std::log(e.sup));
  }
  if (x.size() < 5) throw ValidationError("window", "fewer than five radial levels in the window");
  const LineFit fit = least_squares(x, y);
  return {-fit.slope, fit.intercept, r_lo, r_hi, fit.rms, static_cast<int>(x.size())};
}

// ---------------------------------------------------------------------------
// Rescaling
// ---------------------------------------------------------------------------

WedgeGrid reference_annulus(double half_angle, int n_r, int n_theta) {
  return {0.5, 2.0, 1.5 * half_angle, n_r, n_theta, RadialSpacing::geometric};
}

ScalarField rescale_field(const ScalarField& w, double R, const WedgeGrid& reference) {
  const WedgeGrid& src = w.grid();
  const double lo = reference.inner_radius(), hi = reference.outer_radius();
  const bool radial_ok = R * lo >= src.inner_radius() * (1.0 - 1e-12) && R * hi <= src.outer_radius() * (1.0 + 1e-12);
  const bool angular_ok = reference.half_angle() <= src.half_angle() * (1.0 + 1e-12);
  if (!(R > 0.0) || !radial_ok || !angular_ok) {
    std::ostringstream msg;
    msg << "rescale_field: R = " << R << " not covered; admissible range is [" << src.inner_radius() / lo << ", "
        << src.outer_radius() / hi << "]";
    if (!angular_ok) msg << " and the source half-angle must be at least " << reference.half_angle();
    throw DomainError(msg.str());
  }

  std::vector<double> logr(src.radii().size());
  for (std::size_t i = 0; i < logr.size(); ++i) logr[i] = std::log(src.radii()[i]);
  const double t0 = src.theta(0), dt = src.theta_step();
  const int nr = src.n_r(), nt = src.n_theta();

  std::vector<double> out(reference.size());
  for (int i = 0; i < reference.n_r(); ++i) {
    const double lr = std::clamp(std::log(R * reference.r(i)), logr.front(), logr.back());
    const auto it = std::upper_bound(logr.begin(), logr.end(), lr);
    const int i0 = std::clamp(static_cast<int>(it - logr.begin()) - 1, 0, nr - 2);
    const double s = (lr - logr[i0]) / (logr[i0 + 1] - logr[i0]);
    for (int j = 0; j < reference.n_theta(); ++j) {
      const double th = reference.theta(j);
      const double pos = (th - t0) / dt;
      const int j0 = std::clamp(static_cast<int>(std::floor(pos)), 0, nt - 2);
      const double t = pos - j0;
      const double v = (1 - s) * (1 - t) * w.at(i0, j0) + s * (1 - t) * w.at(i0 + 1, j0) +
                       (1 - s) * t * w.at(i0, j0 + 1) + s * t * w.at(i0 + 1, j0 + 1);
      out[reference.index(i, j)] = v / R;
    }
  }
  return {reference, std::move(out)};
}

ScalarField rescale_field(const ScalarField& w, double R, double half_angle) {
  return rescale_field(w, R, reference_annulus(half_angle));
}

// ---------------------------------------------------------------------------
// Dyadic decay sequences
// ---------------------------------------------------------------------------

namespace {

bool trends_to_zero(const std::vector<double>& seq, double& slope) {
  slope = 0.0;
  for (double v : seq)
    if (!std::isfinite(v)) return false;
  if (std::all_of(seq.begin(), seq.end(), [](double v) { return v == 0.0; })) return true;
  if (seq.size() < 2) return false;
  if (std::any_of(seq.begin(), seq.end(), [](double v) { return v <= 0.0; })) return seq.back() < seq.front();
  std::vector<double> x(seq.size()), y(seq.size());
  for (std::size_t k = 0; k < seq.size(); ++k) {
    x[k] = static_cast<double>(k) * std::log(2.0);
    y[k] = std::log(seq[k]);
  }
  slope = least_squares(x, y).slope;
  return slope < 0.0 && seq.back() < seq.front();
}

template <class Measure>
DecaySequenceReport dyadic_report(const WedgeGrid& g, double r_lo, double r_hi, Measure measure) {
  if (!(r_lo > 0.0) || !(r_hi >= 2.0 * r_lo * (1.0 - 1e-12)))
    throw ValidationError("window", "need a window spanning at least one dyadic annulus");
  DecaySequenceReport rep{};
  for (double R = r_lo; 2.0 * R <= r_hi * (1.0 + 1e-12); R *= 2.0) {
    DyadicEntry e{R, 0.0, 0.0};
    bool any = false;
    for (int i = 0; i < g.n_r(); ++i) {
      const double r = g.r(i);
      if (r < R * (1.0 - 1e-12) || r >= 2.0 * R * (1.0 - 1e-12)) continue;
      any = true;
      for (int j = 0; j < g.n_theta(); ++j) {
        const auto [a, b] = measure(i, j);
        e.first = std::max(e.first, a);
        e.second = std::max(e.second, b);
      }
    }
    if (!any) throw ValidationError("window", "dyadic annulus contains no radial level");
    rep.entries.push_back(e);
  }
  std::vector<double> s1, s2;
  for (const auto& e : rep.entries) {
    s1.push_back(e.first);
    s2.push_back(e.second);
  }
  rep.first_pass = trends_to_zero(s1, rep.first_slope);
  rep.second_pass = trends_to_zero(s2, rep.second_slope);
  return rep;
}

}  // namespace

DecaySequenceReport derivative_decay_check(const ScalarField& w, double beta, double r_lo, double r_hi) {
  if (!(beta > 0.0)) throw ValidationError("beta", "must be positive");
  const WedgeGrid& g = w.grid();
  const auto d = kernels::cartesian_derivatives(g, kernels::polar_derivatives(g, w.values()));
  return dyadic_report(g, r_lo, r_hi, [&](int i, int j) {
    const std::size_t k = g.index(i, j);
    const double r = g.r(i);
    const double grad = std::hypot(d.d1[k], d.d2[k]);
    const double hess = std::sqrt(d.d11[k] * d.d11[k] + 2.0 * d.d12[k] * d.d12[k] + d.d22[k] * d.d22[k]);
    return std::pair{std::pow(r, 1.0 + beta) * grad, std::pow(r, 2.0 + beta) * hess};
  });
}

DecaySequenceReport angular_derivative_decay(const ScalarField& w, double beta, double r_lo, double r_hi) {
  if (!(beta > 0.0)) throw ValidationError("beta", "must be positive");
  const WedgeGrid& g = w.grid();
  const auto p = kernels::polar_derivatives(g, w.values());
  return dyadic_report(g, r_lo, r_hi, [&](int i, int j) {
    const std::size_t k = g.index(i, j);
    const double s = std::pow(g.r(i), beta);
    return std::pair{s * std::abs(p.t[k]), s * std::abs(p.tt[k])};
  });
}

// ---------------------------------------------------------------------------
// Asymptotic helicoid
// ---------------------------------------------------------------------------

AsymptoteFit helicoid_asymptote_fit(std::span<const CylPoint> samples, double lift) {
  if (lift == 0.0 || !std::isfinite(lift)) throw ValidationError("t", "screw lift must be nonzero");
  if (samples.size() < 5) throw ValidationError("samples", "need at least five samples");
  double rmin = samples.front().r, rmax = rmin;
  for (const auto& s : samples) {
    if (!(s.r > 0.0)) throw ValidationError("samples", "radii must be positive");
    rmin = std::min(rmin, s.r);
    rmax = std::max(rmax, s.r);
  }
  if (rmax < 100.0 * rmin * (1.0 - 1e-12)) throw ValidationError("samples", "radii must span at least two decades");

  const double r_split = std::sqrt(rmin * rmax);
  std::vector<double> th, zz;
  for (const auto& s : samples)
    if (s.r >= r_split) {
      th.push_back(s.theta);
      zz.push_back(s.z);
    }
  const auto [tmin, tmax] = std::minmax_element(th.begin(), th.end());
  if (th.size() < 2 || *tmax - *tmin < 1e-6) throw ValidationError("samples", "theta range too small for a pitch fit");
  const LineFit lf = least_squares(th, zz);

  AsymptoteFit out{};
  out.pitch = lf.slope;
  out.intercept = lf.intercept;
  out.phase = lf.slope != 0.0 ? lf.intercept / lf.slope : 0.0;
  out.beta_max = std::abs(lf.slope / lift) * std::numbers::pi;

  // max residual per bin of width 1/20 decade
  std::map<long, std::pair<double, double>> bins;  // key -> (max residual, max r)
  double scale = 0.0;
  for (const auto& s : samples) {
    const double res = std::abs(s.z - (lf.slope * s.theta + lf.intercept));
    out.max_residual = std::max(out.max_residual, res);
    scale = std::max(scale, std::abs(s.z));
    const long key = std::lround(std::floor(20.0 * std::log10(s.r)));
    auto& b = bins[key];
    b.first = std::max(b.first, res);
    b.second = std::max(b.second, s.r);
  }
  if (out.max_residual > 1e-12 * std::max(1.0, scale)) {
    std::vector<ProfileEntry> prof;
    for (const auto& [key, b] : bins)
      if (b.second <= rmax / 10.0 && b.first > 0.0) prof.push_back({b.second, b.first});
    if (prof.size() >= 5) out.decay = fit_decay_exponent(prof, prof.front().r, prof.back().r);
  }

  // antisymmetry over matched (r, ±θ) pairs
  std::map<std::pair<double, double>, double> index;
  for (const auto& s : samples) index[{s.r, s.theta}] = s.z - out.pitch * s.theta;
  for (const auto& [key, f] : index) {
    if (key.second <= 0.0) continue;
    const auto it = index.find({key.first, -key.second});
    if (it == index.end()) continue;
    out.antisymmetry_checked = true;
    out.antisymmetry_deviation = std::max(out.antisymmetry_deviation, std::abs(f + it->second));
  }
  return out;
}

}  // namespace helicoid
