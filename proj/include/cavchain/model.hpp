#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cavchain/types.hpp"

namespace cavchain {

// How the electron occupation entering the matter coefficients is described:
// a half-filled continuum window centered at k0, or an explicit set of
// lattice momenta.
enum class FermiSeaMode { ContinuumHalfFilled, DiscreteSet };

std::string to_string(FermiSeaMode mode);
FermiSeaMode fermi_mode_from_string(const std::string& name);

// Physical parameters of the chain-cavity system, in units with hbar = 1 and
// omega0 = t_h = 1 by default. k0 is stored reduced to [0, 2*pi); every use
// of it is through 2*pi-periodic functions, so the reduction is free.
struct ModelParams {
  double omega0 = 1.0;  // cavity frequency
  double t_h = 1.0;     // nearest-neighbor hopping energy
  double g = 0.0;       // light-matter coupling (dimensionless)
  double k0 = 0.0;      // center of the occupied momentum window (radians)
  int L = 2;            // number of chain sites

  ModelParams() = default;
  ModelParams(double omega0_, double t_h_, double g_, double k0_, int L_);

  // Vector-potential scale: A = lambda (a^dag + a) with lambda = g/sqrt(L).
  double lambda() const { return g / std::sqrt(static_cast<double>(L)); }
  // Quadrature scale: A = c X with c = sqrt(2) g / sqrt(L).
  double quad_scale() const { return std::sqrt(2.0) * g / std::sqrt(static_cast<double>(L)); }

  ModelParams with_g(double new_g) const;
  ModelParams with_k0(double new_k0) const;
  ModelParams with_L(int new_L) const;

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

// Occupied-momentum summary. C = sum_k cos(k) and S = sum_k sin(k) over the
// occupied states are the only matter quantities the photon sector sees.
struct FermiSea {
  FermiSeaMode mode = FermiSeaMode::ContinuumHalfFilled;
  double k0 = 0.0;
  std::vector<double> occupied;  // discrete mode only, momenta in (-pi, pi]
  double C = 0.0;
  double S = 0.0;
};

// Populate the matter coefficients for the requested occupation mode.
//
// Continuum mode evaluates the closed forms C = (L/pi) cos(k0) and
// S = (L/pi) sin(k0). Discrete mode occupies the floor(L/2) lattice momenta
// 2*pi*j/L closest to k0 on the circle; distance ties break toward larger
// cos(k - k0), then toward smaller k, so the selection is deterministic.
FermiSea fermi_coefficients(const ModelParams& params, FermiSeaMode mode);

// Effective classical energy of the coherent-state displacement x:
//   phi(x) = omega0 x^2 - 2 t_h [C cos(2 g x / sqrt(L)) - S sin(2 g x / sqrt(L))]
// For a continuum sea this equals omega0 x^2 - (2 L t_h / pi) cos(2 g x / sqrt(L) + k0).
double landau_potential(double x, const ModelParams& params, const FermiSea& sea);

// d phi / dx, analytically.
double landau_gradient(double x, const ModelParams& params, const FermiSea& sea);

// d^2 phi / dx^2, analytically.
double landau_curvature(double x, const ModelParams& params, const FermiSea& sea);

// Classical energy surface over the quadratures:
//   E(X, Y) = (omega0/2)(X^2 + Y^2) - 2 t_h [C cos(c X) - S sin(c X)],
// with c the quadrature scale. E(sqrt(2) x, 0) = landau_potential(x).
double mean_field_energy_surface(double X, double Y, const ModelParams& params,
                                 const FermiSea& sea);

// The coherent displacement x and the quadrature X describe the same field
// amplitude in two normalizations, X = sqrt(2) x.
inline double quadrature_from_coherent(double x) { return std::sqrt(2.0) * x; }
inline double coherent_from_quadrature(double X) { return X / std::sqrt(2.0); }

// JSON round trip with keys {omega0, t_h, g, k0, L, fermi_mode}. Unknown
// keys are rejected.
nlohmann::json params_to_json(const ModelParams& params, FermiSeaMode mode);
std::pair<ModelParams, FermiSeaMode> params_from_json(const nlohmann::json& j);

}  // namespace cavchain
