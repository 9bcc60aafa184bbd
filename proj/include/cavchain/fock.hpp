#pragma once

#include <optional>
#include <vector>

#include "cavchain/model.hpp"

namespace cavchain {

// Photon-number basis truncated at occupancy n_max (dimension n_max + 1).
struct TruncatedBasis {
  int n_max = 30;
};

using FockOperator = Mat;

// Vector potential A = lambda (a^dag + a) in the truncated basis: symmetric
// tridiagonal with off-diagonal lambda sqrt(n+1) and zero diagonal.
FockOperator build_vector_potential(int n_max, double lambda);
FockOperator build_A(const TruncatedBasis& basis, const ModelParams& params);

struct OperatorCosSin {
  FockOperator cos;
  FockOperator sin;
};

// cos(A) and sin(A) by full symmetric eigendecomposition of A. The outputs
// are symmetrized bit-exactly, and the parity selection rules
// <m|cos A|n> = 0 for odd m+n and <m|sin A|n> = 0 for even m+n (A changes
// photon parity) are enforced as exact zeros.
OperatorCosSin matrix_cos_sin(const FockOperator& A);

// H = omega0 (N + 1/2) - 2 t_h [C cos(A) - S sin(A)] in the truncated basis.
// For a continuum sea this contracts to
// omega0 (N + 1/2) - (2 L t_h / pi) cos(A + k0).
FockOperator build_hamiltonian(const TruncatedBasis& basis, const ModelParams& params,
                               const FermiSea& sea);

// Exact photon-sector ground state. Amplitudes are real and sign-fixed so
// the largest-magnitude component is positive. When the sine coefficient S
// vanishes the Hamiltonian conserves photon parity exactly and the parity
// blocks are diagonalized separately, so odd amplitudes come out as exact
// zeros. The convergence flag requires the basis-doubling test
// |delta n_mean| < 1e-6 and a top-amplitude mass below 1e-10.
struct FockGroundState {
  Vec amplitudes;
  double energy = 0.0;
  double n_mean = 0.0;
  double a_mean = 0.0;
  double parity_odd_weight = 0.0;
  bool converged = false;
  int n_max = 0;
};

FockGroundState ground_state(const TruncatedBasis& basis, const ModelParams& params,
                             const FermiSea& sea);

// P(n) = psi_n^2 with log entries absent (rather than -inf) when P < 1e-300.
struct DistributionRow {
  int n = 0;
  double p = 0.0;
  std::optional<double> log_p;
};

std::vector<DistributionRow> photon_distribution(const FockGroundState& gs);

// Per-site energy e(n, k0) of a photon number state over a k0 grid, with a
// half-filled continuum sea:
//   e = [omega0 (n + 1/2) - 2 t_h (L/pi) cos(k0) <n|cos A|n>] / L.
// The basis is chosen internally as n_max = max(4 n_phot, 60).
struct BandPoint {
  double k0 = 0.0;
  double e = 0.0;
};

std::vector<BandPoint> number_state_band(int n_phot, const std::vector<double>& k0_grid,
                                         const ModelParams& params);

}  // namespace cavchain
