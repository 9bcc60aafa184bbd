#include "cavchain/fock.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace cavchain {

namespace {

void validate_basis(const TruncatedBasis& basis) {
  if (basis.n_max < 1) throw std::invalid_argument("basis n_max must be at least 1");
}

bool is_diagonal(const Mat& H) {
  for (Eigen::Index i = 0; i < H.rows(); ++i) {
    for (Eigen::Index j = 0; j < H.cols(); ++j) {
      if (i != j && H(i, j) != 0.0) return false;
    }
  }
  return true;
}

struct LowestPair {
  double energy = 0.0;
  Vec amplitudes;
};

void sign_fix(Vec& v) {
  Eigen::Index i_max = 0;
  v.cwiseAbs().maxCoeff(&i_max);
  if (v(i_max) < 0.0) v = -v;
}

LowestPair lowest_of(const Mat& H) {
  LowestPair out;
  if (is_diagonal(H)) {
    Eigen::Index i_min = 0;
    H.diagonal().minCoeff(&i_min);
    out.energy = H(i_min, i_min);
    out.amplitudes = Vec::Zero(H.rows());
    out.amplitudes(i_min) = 1.0;
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(H);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("fock: eigendecomposition failed");
  }
  out.energy = solver.eigenvalues()(0);
  out.amplitudes = solver.eigenvectors().col(0);
  return out;
}

// Ground state assembled from the exact parity blocks when S = 0, otherwise
// from the full matrix. Parity-block solves make odd (or even) amplitudes
// exact zeros instead of eigensolver roundoff.
LowestPair solve_ground(const TruncatedBasis& basis, const ModelParams& params,
                        const FermiSea& sea) {
  const Mat H = build_hamiltonian(basis, params, sea);
  const Eigen::Index dim = H.rows();

  if (sea.S != 0.0) {
    LowestPair out = lowest_of(H);
    sign_fix(out.amplitudes);
    return out;
  }

  const Eigen::Index n_even = (dim + 1) / 2;
  const Eigen::Index n_odd = dim / 2;
  Mat He(n_even, n_even), Ho(n_odd, n_odd);
  for (Eigen::Index i = 0; i < n_even; ++i) {
    for (Eigen::Index j = 0; j < n_even; ++j) He(i, j) = H(2 * i, 2 * j);
  }
  for (Eigen::Index i = 0; i < n_odd; ++i) {
    for (Eigen::Index j = 0; j < n_odd; ++j) Ho(i, j) = H(2 * i + 1, 2 * j + 1);
  }
  const LowestPair even = lowest_of(He);
  const LowestPair odd = lowest_of(Ho);

  LowestPair out;
  out.amplitudes = Vec::Zero(dim);
  if (even.energy <= odd.energy) {  // exact tie prefers the even sector
    out.energy = even.energy;
    for (Eigen::Index i = 0; i < n_even; ++i) out.amplitudes(2 * i) = even.amplitudes(i);
  } else {
    out.energy = odd.energy;
    for (Eigen::Index i = 0; i < n_odd; ++i) out.amplitudes(2 * i + 1) = odd.amplitudes(i);
  }
  sign_fix(out.amplitudes);
  return out;
}

double mean_occupation(const Vec& psi) {
  double n = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    n += static_cast<double>(i) * psi(i) * psi(i);
  }
  return n;
}

}  // namespace

FockOperator build_vector_potential(int n_max, double lambda) {
  if (n_max < 1) throw std::invalid_argument("basis n_max must be at least 1");
  Mat A = Mat::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n < n_max; ++n) {
    const double v = lambda * std::sqrt(static_cast<double>(n + 1));
    A(n, n + 1) = v;
    A(n + 1, n) = v;
  }
  return A;
}

FockOperator build_A(const TruncatedBasis& basis, const ModelParams& params) {
  validate_basis(basis);
  return build_vector_potential(basis.n_max, params.lambda());
}

OperatorCosSin matrix_cos_sin(const FockOperator& A) {
  const Eigen::Index dim = A.rows();
  OperatorCosSin out;

  if (A.isZero(0.0)) {
    out.cos = Mat::Identity(dim, dim);
    out.sin = Mat::Zero(dim, dim);
    return out;
  }

  Eigen::SelfAdjointEigenSolver<Mat> solver(A);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("matrix_cos_sin: eigendecomposition failed");
  }
  const Mat& V = solver.eigenvectors();
  const Vec cos_d = solver.eigenvalues().array().cos();
  const Vec sin_d = solver.eigenvalues().array().sin();
  Mat cosA = V * cos_d.asDiagonal() * V.transpose();
  Mat sinA = V * sin_d.asDiagonal() * V.transpose();

  // Bit-exact symmetry, then the exact parity structure: cos(A) couples only
  // equal photon parities and sin(A) only opposite ones.
  cosA = 0.5 * (cosA + Mat(cosA.transpose()));
  sinA = 0.5 * (sinA + Mat(sinA.transpose()));
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (((i + j) & 1) != 0) {
        cosA(i, j) = 0.0;
      } else {
        sinA(i, j) = 0.0;
      }
    }
  }
  out.cos = std::move(cosA);
  out.sin = std::move(sinA);
  return out;
}

FockOperator build_hamiltonian(const TruncatedBasis& basis, const ModelParams& params,
                               const FermiSea& sea) {
  validate_basis(basis);
  params.validate();
  const OperatorCosSin cs = matrix_cos_sin(build_A(basis, params));
  Mat H = -2.0 * params.t_h * (sea.C * cs.cos - sea.S * cs.sin);
  for (int n = 0; n <= basis.n_max; ++n) {
    H(n, n) += params.omega0 * (static_cast<double>(n) + 0.5);
  }
  return H;
}

FockGroundState ground_state(const TruncatedBasis& basis, const ModelParams& params,
                             const FermiSea& sea) {
  validate_basis(basis);
  const LowestPair solved = solve_ground(basis, params, sea);

  FockGroundState gs;
  gs.n_max = basis.n_max;
  gs.energy = solved.energy;
  gs.amplitudes = solved.amplitudes;
  gs.n_mean = mean_occupation(gs.amplitudes);

  gs.a_mean = 0.0;
  for (int n = 0; n < basis.n_max; ++n) {
    gs.a_mean += std::sqrt(static_cast<double>(n + 1)) * gs.amplitudes(n) * gs.amplitudes(n + 1);
  }
  gs.parity_odd_weight = 0.0;
  for (int n = 1; n <= basis.n_max; n += 2) {
    gs.parity_odd_weight += gs.amplitudes(n) * gs.amplitudes(n);
  }

  // Convergence: doubling the basis must leave <n> unchanged to 1e-6 and the
  // retained top amplitude must carry negligible mass.
  const LowestPair doubled = solve_ground(TruncatedBasis{2 * basis.n_max}, params, sea);
  const double tail = gs.amplitudes(basis.n_max) * gs.amplitudes(basis.n_max);
  gs.converged =
      std::fabs(gs.n_mean - mean_occupation(doubled.amplitudes)) < 1e-6 && tail < 1e-10;
  return gs;
}

std::vector<DistributionRow> photon_distribution(const FockGroundState& gs) {
  std::vector<DistributionRow> rows;
  rows.reserve(gs.amplitudes.size());
  for (Eigen::Index n = 0; n < gs.amplitudes.size(); ++n) {
    DistributionRow row;
    row.n = static_cast<int>(n);
    row.p = gs.amplitudes(n) * gs.amplitudes(n);
    if (row.p >= 1e-300) row.log_p = std::log(row.p);
    rows.push_back(row);
  }
  return rows;
}

std::vector<BandPoint> number_state_band(int n_phot, const std::vector<double>& k0_grid,
                                         const ModelParams& params) {
  if (n_phot < 0) throw std::invalid_argument("number_state_band: n_phot must be nonnegative");
  const int n_max = std::max(4 * n_phot, 60);
  const OperatorCosSin cs = matrix_cos_sin(build_vector_potential(n_max, params.lambda()));
  const double diag_cos = cs.cos(n_phot, n_phot);
  const double Ld = static_cast<double>(params.L);

  std::vector<BandPoint> band;
  band.reserve(k0_grid.size());
  for (double k0 : k0_grid) {
    BandPoint pt;
    pt.k0 = k0;
    pt.e = (params.omega0 * (static_cast<double>(n_phot) + 0.5) -
            2.0 * params.t_h * (Ld / M_PI) * std::cos(k0) * diag_cos) /
           Ld;
    band.push_back(pt);
  }
  return band;
}

}  // namespace cavchain
