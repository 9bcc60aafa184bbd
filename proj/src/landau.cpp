#include "cavchain/landau.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cavchain/rootfind.hpp"

namespace cavchain {

namespace {

double gradient_amplitude(const ModelParams& p, const FermiSea& sea) {
  const double u = 2.0 * p.g / std::sqrt(static_cast<double>(p.L));
  return 2.0 * p.t_h * u * (std::fabs(sea.C) + std::fabs(sea.S));
}

CriticalPoint classify(double x, const ModelParams& p, const FermiSea& sea) {
  CriticalPoint cp;
  cp.x_star = x;
  cp.phi_value = landau_potential(x, p, sea);
  cp.phi_curvature = landau_curvature(x, p, sea);
  cp.is_minimum = cp.phi_curvature > 0.0;
  cp.degenerate = std::fabs(cp.phi_curvature) < 1e-10;
  return cp;
}

// Recursive adaptive Simpson on [a, b] with the classic Richardson control.
// The leaf tolerance is not halved per level; the total error is then
// bounded by the leaf count times abs_tol, which the caller scales far below
// its accuracy target. A fixed depth cap keeps roundoff-limited subintervals
// from recursing forever.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb,
                        double whole, double abs_tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * abs_tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, abs_tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, abs_tol, depth - 1);
}

template <class F>
double integrate(F&& f, double a, double b, double abs_tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, abs_tol, 28);
}

}  // namespace

std::vector<CriticalPoint> critical_points(const ModelParams& params, const FermiSea& sea,
                                           double search_window_multiplier, int sweep_samples) {
  params.validate();
  if (!(search_window_multiplier >= 1.0)) {
    throw std::invalid_argument("critical_points: window multiplier must be >= 1");
  }

  const double amp = gradient_amplitude(params, sea);
  if (amp == 0.0) {
    // Pure parabola: unique minimum at the origin with curvature 2 omega0.
    return {classify(0.0, params, sea)};
  }

  const double x_bound = amp / (2.0 * params.omega0);
  const double window = search_window_multiplier * x_bound;
  const double u = 2.0 * params.g / std::sqrt(static_cast<double>(params.L));

  int n_samples = sweep_samples;
  if (n_samples <= 0) {
    const double oscillations = 2.0 * window * u / kTwoPi;
    n_samples = static_cast<int>(std::min(2.0e6, std::max(4097.0, 128.0 * std::ceil(oscillations + 1.0))));
  }

  std::vector<double> seeds = {0.0};
  const int m_lo = static_cast<int>(std::floor((-u * window + params.k0) / M_PI)) - 1;
  const int m_hi = static_cast<int>(std::ceil((u * window + params.k0) / M_PI)) + 1;
  if (m_hi - m_lo < 4096) {
    for (int m = m_lo; m <= m_hi; ++m) {
      seeds.push_back((static_cast<double>(m) * M_PI - params.k0) / u);
    }
  }

  auto grad = [&](double x) { return landau_gradient(x, params, sea); };
  const double xtol = std::max(1e-12 * x_bound, 4.0 * std::numeric_limits<double>::min());
  std::vector<double> roots = find_sign_change_roots(grad, -window, window, n_samples, xtol, seeds);
  roots = dedup_roots(grad, std::move(roots), 1e-8 * x_bound);

  std::vector<CriticalPoint> cps;
  cps.reserve(roots.size());
  for (double x : roots) cps.push_back(classify(x, params, sea));
  return cps;
}

PartitionResult partition_function(const ModelParams& params, const FermiSea& sea, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("partition_function: beta must be positive");
  params.validate();

  PartitionResult result;
  result.beta = beta;

  const std::vector<CriticalPoint> cps = critical_points(params, sea);

  double phi_min = std::numeric_limits<double>::infinity();
  for (const CriticalPoint& cp : cps) {
    if (cp.is_minimum && cp.phi_value < phi_min) {
      phi_min = cp.phi_value;
      result.dominant_x = cp.x_star;
    }
    if (cp.is_minimum && cp.degenerate) result.laplace_degenerate = true;
  }
  if (!std::isfinite(phi_min)) {
    // No interior minimum was classified (flat or fully degenerate case);
    // anchor the scale at the outermost stationary values.
    for (const CriticalPoint& cp : cps) phi_min = std::min(phi_min, cp.phi_value);
    result.laplace_degenerate = true;
  }

  // Weight normalized at the global minimum so exp never overflows.
  auto weight = [&](double x) { return std::exp(-beta * (landau_potential(x, params, sea) - phi_min)); };

  // Integration window: all stationary points, extended until the integrand
  // tail falls below 1e-16 of the peak (phi grows as omega0 x^2 outside).
  double lo = cps.front().x_star;
  double hi = cps.back().x_star;
  double step = std::max(1.0, 1.0 / std::sqrt(beta * params.omega0));
  while (weight(lo) > 1e-16) {
    lo -= step;
    step *= 2.0;
  }
  step = std::max(1.0, 1.0 / std::sqrt(beta * params.omega0));
  while (weight(hi) > 1e-16) {
    hi += step;
    step *= 2.0;
  }

  // Laplace sum over local minima, with weights relative to the global
  // minimum. The Gaussian estimate also sets the quadrature tolerance scale.
  double laplace_sum = 0.0;
  double gauss_integral_estimate = 0.0;
  for (const CriticalPoint& cp : cps) {
    if (!cp.is_minimum || !(cp.phi_curvature > 0.0)) continue;
    const double rel = std::exp(-beta * (cp.phi_value - phi_min));
    gauss_integral_estimate += rel * std::sqrt(kTwoPi / (beta * cp.phi_curvature));
    laplace_sum += rel * std::sqrt(2.0) / (beta * std::sqrt(params.omega0 * cp.phi_curvature));
  }

  // Piecewise adaptive quadrature between stationary points; the integrand is
  // monotone on each subinterval, which keeps the recursion honest.
  std::vector<double> nodes;
  nodes.push_back(lo);
  for (const CriticalPoint& cp : cps) {
    if (cp.x_star > lo && cp.x_star < hi) nodes.push_back(cp.x_star);
  }
  nodes.push_back(hi);
  const double abs_tol =
      std::max(gauss_integral_estimate, 1e-300) * 1e-14 / static_cast<double>(nodes.size());
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    integral += integrate(weight, nodes[i], nodes[i + 1], abs_tol);
  }

  result.ln_Z_numeric = -beta * phi_min + std::log(integral) - 0.5 * std::log(M_PI * beta * params.omega0);
  result.ln_Z_laplace = laplace_sum > 0.0 ? -beta * phi_min + std::log(laplace_sum)
                                          : -std::numeric_limits<double>::infinity();
  result.Z_numeric = std::exp(result.ln_Z_numeric);
  result.Z_laplace = std::exp(result.ln_Z_laplace);
  result.free_energy = -result.ln_Z_numeric / beta;
  return result;
}

}  // namespace cavchain
