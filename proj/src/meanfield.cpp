#include "cavchain/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cavchain/bessel.hpp"
#include "cavchain/rootfind.hpp"

namespace cavchain {

namespace {

// r(X) = omega0 X + 2 t_h c [C sin(cX) + S cos(cX)] = dE/dX on the Y = 0 axis.
// Fixed points are its roots; r' is the energy-surface curvature along X.
double residual(double X, const ModelParams& p, const FermiSea& sea) {
  const double c = p.quad_scale();
  return p.omega0 * X + 2.0 * p.t_h * c * (sea.C * std::sin(c * X) + sea.S * std::cos(c * X));
}

double residual_slope(double X, const ModelParams& p, const FermiSea& sea) {
  const double c = p.quad_scale();
  return p.omega0 + 2.0 * p.t_h * c * c * (sea.C * std::cos(c * X) - sea.S * std::sin(c * X));
}

double matter_amplitude(const ModelParams& p, const FermiSea& sea) {
  return 2.0 * p.t_h * p.quad_scale() * (std::fabs(sea.C) + std::fabs(sea.S));
}

FixedPoint classify_root(double X, const ModelParams& p, const FermiSea& sea) {
  FixedPoint fp;
  fp.X_star = X;
  fp.Y_star = 0.0;
  const double slope = residual_slope(X, p, sea);
  fp.stability = slope > 0.0 ? Stability::Center : Stability::Saddle;
  fp.degenerate = std::fabs(slope) < 1e-10;
  fp.omega_fluct = std::sqrt(std::fabs(p.omega0 * slope));
  const double c = p.quad_scale();
  fp.basin_tag = c > 0.0 ? static_cast<int>(std::lround((c * X + p.k0) / M_PI)) : 0;
  return fp;
}

}  // namespace

FlowRate flow(const QuadratureState& state, const ModelParams& params, const FermiSea& sea) {
  FlowRate rate;
  rate.dX = params.omega0 * state.Y;
  rate.dY = -residual(state.X, params, sea);
  return rate;
}

std::vector<QuadratureState> evolve(const QuadratureState& initial, const ModelParams& params,
                                    const FermiSea& sea, double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end > 0.0)) {
    throw std::invalid_argument("evolve: t_end and dt must be positive");
  }
  if (!std::isfinite(initial.X) || !std::isfinite(initial.Y)) {
    throw std::invalid_argument("evolve: initial state must be finite");
  }
  const long long n_steps = std::max<long long>(1, std::llround(t_end / dt));
  std::vector<QuadratureState> trajectory;
  trajectory.reserve(static_cast<std::size_t>(n_steps) + 1);

  double X = initial.X;
  double Y = initial.Y;
  trajectory.push_back({X, Y, 0.0});

  const double c = params.quad_scale();
  const double w0 = params.omega0;
  const double th = params.t_h;
  const double C = sea.C;
  const double S = sea.S;
  auto accel = [&](double x) {
    return -(w0 * x + 2.0 * th * c * (C * std::sin(c * x) + S * std::cos(c * x)));
  };

  for (long long i = 1; i <= n_steps; ++i) {
    const double k1x = w0 * Y;
    const double k1y = accel(X);
    const double k2x = w0 * (Y + 0.5 * dt * k1y);
    const double k2y = accel(X + 0.5 * dt * k1x);
    const double k3x = w0 * (Y + 0.5 * dt * k2y);
    const double k3y = accel(X + 0.5 * dt * k2x);
    const double k4x = w0 * (Y + dt * k3y);
    const double k4y = accel(X + dt * k3x);
    X += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    Y += dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    trajectory.push_back({X, Y, static_cast<double>(i) * dt});
  }
  return trajectory;
}

std::vector<FixedPoint> find_fixed_points(const ModelParams& params, const FermiSea& sea,
                                          double search_window_multiplier, int sweep_samples) {
  params.validate();
  if (!(search_window_multiplier >= 1.0)) {
    throw std::invalid_argument("find_fixed_points: window multiplier must be >= 1");
  }

  const double amp = matter_amplitude(params, sea);
  if (amp == 0.0) {
    // No matter force: the flow is a harmonic oscillator with its center at
    // the origin.
    FixedPoint fp;
    fp.X_star = 0.0;
    fp.stability = Stability::Center;
    fp.omega_fluct = params.omega0;
    fp.basin_tag = 0;
    return {fp};
  }

  const double X_bound = amp / params.omega0;
  const double window = search_window_multiplier * X_bound;
  const double c = params.quad_scale();

  int n_samples = sweep_samples;
  if (n_samples <= 0) {
    const double oscillations = 2.0 * window * c / kTwoPi;
    n_samples = static_cast<int>(std::min(2.0e6, std::max(4097.0, 128.0 * std::ceil(oscillations + 1.0))));
  }

  // Seed with the approximate equilibrium family X_m = (m pi - k0)/c and the
  // exact origin (a root whenever S = 0).
  std::vector<double> seeds = {0.0};
  const int m_lo = static_cast<int>(std::floor((-c * window + params.k0) / M_PI)) - 1;
  const int m_hi = static_cast<int>(std::ceil((c * window + params.k0) / M_PI)) + 1;
  if (m_hi - m_lo < 4096) {
    for (int m = m_lo; m <= m_hi; ++m) {
      seeds.push_back((static_cast<double>(m) * M_PI - params.k0) / c);
    }
  }

  auto r = [&](double X) { return residual(X, params, sea); };
  const double xtol = std::max(1e-12 * X_bound, 4.0 * std::numeric_limits<double>::min());
  std::vector<double> roots = find_sign_change_roots(r, -window, window, n_samples, xtol, seeds);
  roots = dedup_roots(r, std::move(roots), 1e-8 * X_bound);

  std::vector<FixedPoint> fps;
  fps.reserve(roots.size());
  for (double X : roots) fps.push_back(classify_root(X, params, sea));
  return fps;
}

double fluctuation_frequency(const FixedPoint& fp, const ModelParams& params,
                             const FermiSea& sea) {
  const double c = params.quad_scale();
  const double matter = 2.0 * params.t_h * c * c *
                        (sea.C * std::cos(c * fp.X_star) - sea.S * std::sin(c * fp.X_star));
  if (matter == 0.0) return params.omega0;
  return std::sqrt(std::fabs(params.omega0 * (params.omega0 + matter)));
}

std::vector<FluctuationSample> evolve_fluctuation(const std::vector<QuadratureState>& trajectory,
                                                  const ModelParams& params, const FermiSea& sea,
                                                  double dX0, double dV0) {
  if (trajectory.size() < 2) {
    throw std::invalid_argument("evolve_fluctuation: trajectory must have at least two samples");
  }
  const double dt = trajectory[1].t - trajectory[0].t;
  if (!(dt > 0.0)) throw std::invalid_argument("evolve_fluctuation: trajectory has no time step");

  const double c = params.quad_scale();
  const double w0 = params.omega0;
  const double th = params.t_h;
  const double C = sea.C;
  const double S = sea.S;
  auto accel = [&](double x) {
    return -(w0 * x + 2.0 * th * c * (C * std::sin(c * x) + S * std::cos(c * x)));
  };
  auto omega_sq = [&](double x) {
    return w0 * (w0 + 2.0 * th * c * c * (C * std::cos(c * x) - S * std::sin(c * x)));
  };

  // Joint integration of (X, Y, dX, dV) keeps the fluctuation coefficient
  // consistent at RK substeps; the mean-field component reproduces the input
  // trajectory because the integrator and step match.
  double X = trajectory.front().X;
  double Y = trajectory.front().Y;
  double fx = dX0;
  double fv = dV0;

  std::vector<FluctuationSample> out;
  out.reserve(trajectory.size());
  out.push_back({trajectory.front().t, fx, fv});

  struct State4 {
    double X, Y, fx, fv;
  };
  auto deriv = [&](const State4& s) {
    return State4{w0 * s.Y, accel(s.X), s.fv, -omega_sq(s.X) * s.fx};
  };

  const double t0 = trajectory.front().t;
  for (std::size_t i = 1; i < trajectory.size(); ++i) {
    const State4 s{X, Y, fx, fv};
    const State4 k1 = deriv(s);
    const State4 s2{X + 0.5 * dt * k1.X, Y + 0.5 * dt * k1.Y, fx + 0.5 * dt * k1.fx,
                    fv + 0.5 * dt * k1.fv};
    const State4 k2 = deriv(s2);
    const State4 s3{X + 0.5 * dt * k2.X, Y + 0.5 * dt * k2.Y, fx + 0.5 * dt * k2.fx,
                    fv + 0.5 * dt * k2.fv};
    const State4 k3 = deriv(s3);
    const State4 s4{X + dt * k3.X, Y + dt * k3.Y, fx + dt * k3.fx, fv + dt * k3.fv};
    const State4 k4 = deriv(s4);
    X += dt / 6.0 * (k1.X + 2.0 * k2.X + 2.0 * k3.X + k4.X);
    Y += dt / 6.0 * (k1.Y + 2.0 * k2.Y + 2.0 * k3.Y + k4.Y);
    fx += dt / 6.0 * (k1.fx + 2.0 * k2.fx + 2.0 * k3.fx + k4.fx);
    fv += dt / 6.0 * (k1.fv + 2.0 * k2.fv + 2.0 * k3.fv + k4.fv);
    out.push_back({t0 + static_cast<double>(i) * dt, fx, fv});
  }
  return out;
}

WeakCouplingBound weak_coupling_bound(const ModelParams& params) {
  params.validate();
  WeakCouplingBound bound;
  bound.curvature_consistent = std::sqrt(M_PI * params.omega0 / (4.0 * params.t_h));
  bound.as_printed = 0.5 * params.omega0 * std::sqrt(M_PI * static_cast<double>(params.L) / params.t_h);
  return bound;
}

std::string to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::A: return "A";
    case RegionLabel::B: return "B";
    case RegionLabel::C: return "C";
    case RegionLabel::D: return "D";
    default: return "Other";
  }
}

PhaseRegion phase_region(const ModelParams& params, const FermiSea& sea) {
  const std::vector<FixedPoint> fps = find_fixed_points(params, sea);
  PhaseRegion region;
  region.g = params.g;
  region.k0 = params.k0;
  region.n_equilibria = static_cast<int>(fps.size());
  for (const FixedPoint& fp : fps) {
    if (fp.stability == Stability::Center) ++region.n_centers;
    if (fp.degenerate) region.on_boundary = true;
  }
  switch (region.n_equilibria) {
    case 1: region.region_label = RegionLabel::A; break;
    case 3: region.region_label = RegionLabel::B; break;
    case 5: region.region_label = RegionLabel::C; break;
    case 7: region.region_label = RegionLabel::D; break;
    default: region.region_label = RegionLabel::Other; break;
  }
  return region;
}

std::complex<double> order_parameter(const FixedPoint& fp) {
  return std::complex<double>(fp.X_star / std::sqrt(2.0), fp.Y_star / std::sqrt(2.0));
}

MeanEnergyResult mean_energy_density(const std::vector<QuadratureState>& trajectory,
                                     const ModelParams& params, const FermiSea& sea) {
  if (trajectory.size() < 2) {
    throw std::invalid_argument("mean_energy_density: trajectory too short");
  }

  double x_min = trajectory.front().X;
  double x_max = x_min;
  double x_sum = 0.0;
  for (const QuadratureState& s : trajectory) {
    x_min = std::min(x_min, s.X);
    x_max = std::max(x_max, s.X);
    x_sum += s.X;
  }
  const double x_mean = x_sum / static_cast<double>(trajectory.size());

  // The trajectory must oscillate around one Center without reaching the
  // adjacent equilibria; otherwise the single-well average is meaningless.
  const std::vector<FixedPoint> fps = find_fixed_points(params, sea);
  const FixedPoint* center = nullptr;
  for (const FixedPoint& fp : fps) {
    if (fp.stability != Stability::Center) continue;
    if (center == nullptr || std::fabs(fp.X_star - x_mean) < std::fabs(center->X_star - x_mean)) {
      center = &fp;
    }
  }
  if (center == nullptr) {
    throw std::invalid_argument("mean_energy_density: no stable center found");
  }
  for (const FixedPoint& fp : fps) {
    if (fp.X_star > center->X_star && x_max >= fp.X_star) {
      throw std::invalid_argument("mean_energy_density: trajectory spans multiple wells");
    }
    if (fp.X_star < center->X_star && x_min <= fp.X_star) {
      throw std::invalid_argument("mean_energy_density: trajectory spans multiple wells");
    }
  }

  MeanEnergyResult result;
  result.X_center = center->X_star;
  const double R = 0.5 * (x_max - x_min);
  const double c = params.quad_scale();
  result.phase_amplitude = c * R;
  result.photon_number = 0.5 * (center->X_star * center->X_star + 0.5 * R * R);

  const double Ld = static_cast<double>(params.L);
  auto matter_per_site = [&](double X) {
    const double cx = c * X;
    return -2.0 * params.t_h / Ld * (sea.C * std::cos(cx) - sea.S * std::sin(cx));
  };

  result.time.reserve(trajectory.size());
  result.energy.reserve(trajectory.size());
  for (const QuadratureState& s : trajectory) {
    result.time.push_back(s.t);
    result.energy.push_back(result.photon_number * params.omega0 + matter_per_site(s.X));
  }

  // Average over a whole number of periods, delimited by upward crossings of
  // the center. Falls back to the full series when the trajectory does not
  // complete a period.
  double t_first = -1.0, t_last = -1.0;
  int n_crossings = 0;
  for (std::size_t i = 1; i < trajectory.size(); ++i) {
    const double a = trajectory[i - 1].X - center->X_star;
    const double b = trajectory[i].X - center->X_star;
    if (a <= 0.0 && b > 0.0) {
      const double frac = (b - a) != 0.0 ? -a / (b - a) : 0.0;
      const double tc = trajectory[i - 1].t + frac * (trajectory[i].t - trajectory[i - 1].t);
      if (n_crossings == 0) t_first = tc;
      t_last = tc;
      ++n_crossings;
    }
  }

  double lo = trajectory.front().t;
  double hi = trajectory.back().t;
  if (n_crossings >= 2) {
    lo = t_first;
    hi = t_last;
  }

  // Trapezoid over [lo, hi] with linear interpolation at the cut ends.
  double integral = 0.0;
  auto value_at = [&](double t, std::size_t hint) {
    std::size_t i = hint;
    while (i + 1 < result.time.size() && result.time[i + 1] < t) ++i;
    const double t0 = result.time[i], t1 = result.time[i + 1];
    const double f0 = result.energy[i], f1 = result.energy[i + 1];
    const double w = (t1 - t0) != 0.0 ? (t - t0) / (t1 - t0) : 0.0;
    return f0 + w * (f1 - f0);
  };
  std::size_t i_lo = 0;
  while (i_lo + 1 < result.time.size() && result.time[i_lo + 1] <= lo) ++i_lo;
  std::size_t i_hi = result.time.size() - 1;
  while (i_hi > 0 && result.time[i_hi - 1] >= hi) --i_hi;

  double prev_t = lo;
  double prev_f = value_at(lo, i_lo);
  for (std::size_t i = i_lo + 1; i <= i_hi; ++i) {
    if (result.time[i] >= hi) break;
    if (result.time[i] <= lo) continue;
    integral += 0.5 * (result.energy[i] + prev_f) * (result.time[i] - prev_t);
    prev_t = result.time[i];
    prev_f = result.energy[i];
  }
  const double f_hi = value_at(hi, i_lo);
  integral += 0.5 * (f_hi + prev_f) * (hi - prev_t);
  result.time_average = (hi > lo) ? integral / (hi - lo) : result.energy.front();

  const double cxs = c * center->X_star;
  result.bessel_prediction =
      result.photon_number * params.omega0 -
      2.0 * params.t_h / Ld * bessel_j0(result.phase_amplitude) *
          (sea.C * std::cos(cxs) - sea.S * std::sin(cxs));
  return result;
}

}  // namespace cavchain
