#pragma once

#include <complex>
#include <vector>

#include "cavchain/model.hpp"

namespace cavchain {

// A point of the classical quadrature flow.
struct QuadratureState {
  double X = 0.0;
  double Y = 0.0;
  double t = 0.0;
};

enum class Stability { Center, Saddle };

// An equilibrium of the mean-field flow. Equilibria always sit on the X axis
// (Y_star = 0). omega_fluct holds the oscillation frequency of fluctuations
// around a Center, or the magnitude of the exponential growth rate at a
// Saddle. basin_tag is the integer m of the nearest approximate equilibrium
// family c X + k0 = m pi.
struct FixedPoint {
  double X_star = 0.0;
  double Y_star = 0.0;
  Stability stability = Stability::Center;
  double omega_fluct = 0.0;
  int basin_tag = 0;
  bool degenerate = false;  // |r'(X_star)| below the bifurcation threshold
};

struct FlowRate {
  double dX = 0.0;
  double dY = 0.0;
};

// Heisenberg mean-field equations derived from the energy surface:
//   dX/dt =  omega0 Y = dE/dY
//   dY/dt = -omega0 X - 2 t_h c [C sin(c X) + S cos(c X)] = -dE/dX
FlowRate flow(const QuadratureState& state, const ModelParams& params, const FermiSea& sea);

// Fixed-step classical 4th-order integration of the flow, sampled every
// step. t_end is rounded to a whole number of steps. Rejects non-finite
// initial states.
std::vector<QuadratureState> evolve(const QuadratureState& initial, const ModelParams& params,
                                    const FermiSea& sea, double t_end, double dt);

// All equilibria of the flow on |X| <= search_window_multiplier * X_bound,
// where X_bound = 2 t_h c (|C| + |S|) / omega0 is the amplitude beyond which
// the linear term dominates the bounded matter force and no root can exist.
//
// Every sign change of the residual r(X) = omega0 X + 2 t_h c [C sin(cX) + S cos(cX)]
// is bracketed on a sweep seeded with the approximate equilibrium family
// X_m = (m pi - k0)/c, refined by bisection to |dX| < 1e-12 X_bound, and
// deduplicated below 1e-8 X_bound. Roots with |r'| < 1e-10 are flagged
// degenerate rather than silently classified.
//
// sweep_samples overrides the sweep density when positive; the default picks
// at least 128 samples per matter oscillation across the window.
std::vector<FixedPoint> find_fixed_points(const ModelParams& params, const FermiSea& sea,
                                          double search_window_multiplier = 1.5,
                                          int sweep_samples = 0);

// Fluctuation frequency around a fixed point,
//   omega^2 = omega0 [omega0 + 2 t_h c^2 (C cos(c X*) - S sin(c X*))],
// i.e. omega0 times the curvature of the energy surface along X. Returns
// omega for a Center and the imaginary-frequency magnitude for a Saddle.
// When the matter term vanishes the result is omega0 exactly.
double fluctuation_frequency(const FixedPoint& fp, const ModelParams& params,
                             const FermiSea& sea);

struct FluctuationSample {
  double t = 0.0;
  double dX = 0.0;
  double dV = 0.0;
};

// Integrate d^2 dX/dt^2 + omega^2(X(t)) dX = 0 along the given mean-field
// trajectory, with the curvature-consistent local frequency and the same
// step size. The mean field is re-integrated jointly so the coefficient is
// available at substeps.
std::vector<FluctuationSample> evolve_fluctuation(const std::vector<QuadratureState>& trajectory,
                                                  const ModelParams& params, const FermiSea& sea,
                                                  double dX0, double dV0);

// Coupling at which the worst-case fluctuation frequency reaches zero.
// curvature_consistent solves omega0^2 - 4 t_h g^2 omega0 / pi = 0, giving
// g_max = sqrt(pi omega0 / (4 t_h)); as_printed is the size-dependent bound
// (omega0/2) sqrt(pi L / t_h) reported alongside for comparison.
struct WeakCouplingBound {
  double curvature_consistent = 0.0;
  double as_printed = 0.0;
};
WeakCouplingBound weak_coupling_bound(const ModelParams& params);

enum class RegionLabel { A, B, C, D, Other };

std::string to_string(RegionLabel label);

// Classification of a parameter point by its equilibrium count: 1, 3, 5, 7
// map to regions A, B, C, D; anything beyond is Other.
struct PhaseRegion {
  double g = 0.0;
  double k0 = 0.0;
  int n_equilibria = 0;
  int n_centers = 0;
  RegionLabel region_label = RegionLabel::A;
  bool on_boundary = false;  // a degenerate root was diagnosed
};

PhaseRegion phase_region(const ModelParams& params, const FermiSea& sea);

// Order parameter <a> = (X* + i Y*)/sqrt(2); real because Y* = 0.
std::complex<double> order_parameter(const FixedPoint& fp);

// Per-site energy of a trajectory oscillating inside a single well, its
// time average over a whole number of oscillation periods, and the
// Bessel-averaged prediction
//   n omega0 - (2 t_h / L) J0(R0) [C cos(c X*) - S sin(c X*)],
// where R0 is the amplitude of c (X(t) - X*) and the photon number n is the
// harmonic estimate (X*^2 + R^2/2)/2.
struct MeanEnergyResult {
  std::vector<double> time;
  std::vector<double> energy;
  double time_average = 0.0;
  double bessel_prediction = 0.0;
  double X_center = 0.0;       // equilibrium the trajectory oscillates around
  double photon_number = 0.0;  // harmonic estimate n
  double phase_amplitude = 0.0;  // R0
};

MeanEnergyResult mean_energy_density(const std::vector<QuadratureState>& trajectory,
                                     const ModelParams& params, const FermiSea& sea);

}  // namespace cavchain
