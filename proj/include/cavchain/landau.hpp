#pragma once

#include <vector>

#include "cavchain/model.hpp"

namespace cavchain {

// A stationary point of the Landau potential phi(x).
struct CriticalPoint {
  double x_star = 0.0;
  double phi_value = 0.0;
  double phi_curvature = 0.0;
  bool is_minimum = false;
  bool degenerate = false;  // |phi''| below the bifurcation threshold
};

// All roots of landau_gradient, found by the same sweep-and-bisect scheme as
// the mean-field fixed points (the two root sets coincide under X = sqrt(2) x).
// Curvature is evaluated analytically.
std::vector<CriticalPoint> critical_points(const ModelParams& params, const FermiSea& sea,
                                           double search_window_multiplier = 1.5,
                                           int sweep_samples = 0);

// Coherent-state partition function of the photon sector at inverse
// temperature beta,
//   Z = 1/sqrt(pi beta omega0) * Integral exp(-beta phi(x)) dx,
// by adaptive quadrature, together with the multi-well Laplace approximation
// summed over all local minima. Z itself overflows a double once beta times
// the well depth passes ~700, so the logarithms are the primary outputs and
// are always finite.
struct PartitionResult {
  double beta = 0.0;
  double ln_Z_numeric = 0.0;
  double ln_Z_laplace = 0.0;
  double Z_numeric = 0.0;   // exp(ln_Z_numeric); +inf when out of range
  double Z_laplace = 0.0;   // exp(ln_Z_laplace); +inf when out of range
  double free_energy = 0.0;  // -ln(Z_numeric)/beta
  double dominant_x = 0.0;   // location of the global minimum of phi
  bool laplace_degenerate = false;  // a minimum has near-zero curvature
};

PartitionResult partition_function(const ModelParams& params, const FermiSea& sea, double beta);

}  // namespace cavchain
