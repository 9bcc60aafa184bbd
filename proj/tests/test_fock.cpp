#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "cavchain/fock.hpp"
#include "cavchain/meanfield.hpp"
#include "oracles.hpp"

using namespace cavchain;

namespace {

FermiSea continuum(const ModelParams& p) {
  return fermi_coefficients(p, FermiSeaMode::ContinuumHalfFilled);
}

}  // namespace

TEST_CASE("vector potential matrix: explicit 2x2, zero coupling, spectral symmetry") {
  const Mat A = build_vector_potential(1, 0.5);
  CHECK(A(0, 0) == 0.0);
  CHECK(A(1, 1) == 0.0);
  CHECK(A(0, 1) == 0.5);
  CHECK(A(1, 0) == 0.5);

  const ModelParams p0(1.0, 1.0, 0.0, 0.0, 10);
  CHECK(build_A(TruncatedBasis{5}, p0).isZero(0.0));

  // A anticommutes with parity, so its spectrum is symmetric about zero.
  const Mat big = build_vector_potential(200, 0.1);
  Eigen::SelfAdjointEigenSolver<Mat> solver(big);
  const Vec ev = solver.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    CHECK(ev(i) == doctest::Approx(-ev(ev.size() - 1 - i)).epsilon(1e-10));
  }
}

TEST_CASE("matrix_cos_sin: identity at zero, Pythagoras, displacement diagonal, parity zeros") {
  const Mat zero = Mat::Zero(8, 8);
  const OperatorCosSin at_zero = matrix_cos_sin(zero);
  CHECK(at_zero.cos.isIdentity(0.0));
  CHECK(at_zero.sin.isZero(0.0));

  const double lambda = 0.3;
  const Mat A = build_vector_potential(60, lambda);
  const OperatorCosSin cs = matrix_cos_sin(A);

  // cos^2 + sin^2 = 1 on the truncated space, up to truncation leakage.
  const Mat pyth = cs.cos * cs.cos + cs.sin * cs.sin;
  CHECK((pyth - Mat::Identity(61, 61)).cwiseAbs().maxCoeff() < 1e-10);

  // <n|cos A|n> = exp(-lambda^2/2) L_n(lambda^2).
  const double mu2 = lambda * lambda;
  for (int n : {0, 1, 5}) {
    CHECK(std::fabs(cs.cos(n, n) - std::exp(-mu2 / 2.0) * oracles::laguerre(n, mu2)) < 1e-8);
  }

  // Parity selection holds exactly.
  for (int i = 0; i <= 60; ++i) {
    for (int j = 0; j <= 60; ++j) {
      if ((i + j) % 2 == 1) {
        CHECK(cs.cos(i, j) == 0.0);
      } else {
        CHECK(cs.sin(i, j) == 0.0);
      }
    }
  }

  // Bit-exact symmetry.
  CHECK((cs.cos - Mat(cs.cos.transpose())).isZero(0.0));
  CHECK((cs.sin - Mat(cs.sin.transpose())).isZero(0.0));
}

TEST_CASE("hamiltonian: diagonal limit and exact hermiticity") {
  const ModelParams p0(1.0, 1.0, 0.0, 0.0, 510);
  const FermiSea sea0 = continuum(p0);
  const Mat H0 = build_hamiltonian(TruncatedBasis{6}, p0, sea0);
  for (int n = 0; n <= 6; ++n) {
    for (int m = 0; m <= 6; ++m) {
      if (n == m) {
        CHECK(H0(n, n) == doctest::Approx(n + 0.5 - 1020.0 / M_PI).epsilon(1e-14));
      } else {
        CHECK(H0(n, m) == 0.0);
      }
    }
  }

  const ModelParams p(1.0, 1.0, 2.2, 2.6, 510);
  const Mat H = build_hamiltonian(TruncatedBasis{40}, p, continuum(p));
  CHECK((H - Mat(H.transpose())).isZero(0.0));
}

TEST_CASE("hamiltonian: discrete L=4 equals the momentum-summed oracle") {
  const ModelParams p(1.0, 1.0, 0.9, 0.3, 4);
  const FermiSea sea = fermi_coefficients(p, FermiSeaMode::DiscreteSet);
  REQUIRE(sea.occupied.size() == 2);
  const int n_max = 24;
  const Mat H = build_hamiltonian(TruncatedBasis{n_max}, p, sea);

  // Independent route: eigendecompose A in the test and sum 2 t_h cos(A + k)
  // over the occupied momenta, element by element.
  const Mat A = build_vector_potential(n_max, p.lambda());
  Eigen::SelfAdjointEigenSolver<Mat> solver(A);
  const Mat V = solver.eigenvectors();
  Mat oracle = Mat::Zero(n_max + 1, n_max + 1);
  for (double k : sea.occupied) {
    const Vec shifted = (solver.eigenvalues().array() + k).cos();
    oracle -= 2.0 * p.t_h * V * shifted.asDiagonal() * V.transpose();
  }
  for (int n = 0; n <= n_max; ++n) oracle(n, n) += p.omega0 * (n + 0.5);

  CHECK((H - oracle).cwiseAbs().maxCoeff() < 1e-13 * H.cwiseAbs().maxCoeff());
}

TEST_CASE("ground state: zero coupling is the exact vacuum") {
  const ModelParams p(1.0, 1.0, 0.0, 0.7, 12);
  const FermiSea sea = continuum(p);
  const FockGroundState gs = ground_state(TruncatedBasis{30}, p, sea);
  CHECK(gs.n_mean == 0.0);
  CHECK(gs.a_mean == 0.0);
  CHECK(gs.parity_odd_weight == 0.0);
  CHECK(gs.energy == doctest::Approx(0.5 - 2.0 * sea.C).epsilon(1e-14));
  CHECK(gs.amplitudes(0) == 1.0);
  CHECK(gs.converged);
}

TEST_CASE("ground state: exact parity superselection at k0 = 0") {
  for (double g : {0.5, 1.62, 3.0}) {
    for (int L : {10, 510}) {
      const ModelParams p(1.0, 1.0, g, 0.0, L);
      const FockGroundState gs = ground_state(TruncatedBasis{30}, p, continuum(p));
      CHECK(gs.parity_odd_weight == 0.0);
      for (int n = 1; n <= 30; n += 2) CHECK(gs.amplitudes(n) == 0.0);
    }
  }
}

TEST_CASE("ground state: truncation agrees with an enlarged-basis brute force") {
  const ModelParams p(1.0, 1.0, 1.62, 0.0, 10);
  const FermiSea sea = continuum(p);
  const FockGroundState gs30 = ground_state(TruncatedBasis{30}, p, sea);
  const FockGroundState gs120 = ground_state(TruncatedBasis{120}, p, sea);
  CHECK(gs30.converged);
  CHECK(std::fabs(gs30.n_mean - gs120.n_mean) < 1e-6);
  CHECK(std::fabs(gs30.energy - gs120.energy) < 1e-8);
}

TEST_CASE("ground state: flagged unconverged when the basis is too small") {
  // Displacement ~ sqrt(25) photons needs far more than 4 states.
  const ModelParams p(1.0, 1.0, 1.62, 4.13, 100);
  const FockGroundState gs = ground_state(TruncatedBasis{4}, p, continuum(p));
  CHECK(!gs.converged);
}

TEST_CASE("ground energy is nonincreasing in n_max once the basis covers the state") {
  const ModelParams p(1.0, 1.0, 1.62, 2.0, 60);
  const FermiSea sea = continuum(p);

  // A basis far below the state's extent is not variational: cos/sin are
  // built from the truncated A, so leakage can undershoot the true energy.
  // The convergence flag is what detects that regime.
  CHECK(!ground_state(TruncatedBasis{20}, p, sea).converged);

  double previous = std::numeric_limits<double>::infinity();
  for (int n_max : {40, 80, 160, 320}) {
    const FockGroundState gs = ground_state(TruncatedBasis{n_max}, p, sea);
    CHECK(gs.energy <= previous + 1e-9);
    previous = gs.energy;
  }
}

TEST_CASE("spectrum is exactly invariant under k0 -> k0 + 2pi") {
  const ModelParams a(1.0, 1.0, 1.3, 0.5, 60);
  const ModelParams b(1.0, 1.0, 1.3, 0.5 + kTwoPi, 60);
  const FockGroundState ga = ground_state(TruncatedBasis{40}, a, continuum(a));
  const FockGroundState gb = ground_state(TruncatedBasis{40}, b, continuum(b));
  CHECK(ga.energy == gb.energy);
  CHECK(ga.n_mean == gb.n_mean);
}

TEST_CASE("quantum displacement sits at the mean-field minimum for large L") {
  for (int L : {100, 510}) {
    const ModelParams p(1.0, 1.0, 1.62, 4.13, L);
    const FermiSea sea = continuum(p);

    const auto fps = find_fixed_points(p, sea);
    double X_star = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& fp : fps) {
      if (fp.stability != Stability::Center) continue;
      const double e = mean_field_energy_surface(fp.X_star, 0.0, p, sea);
      if (e < best) {
        best = e;
        X_star = fp.X_star;
      }
    }

    const int n_max = L == 100 ? 120 : 480;
    const FockGroundState gs = ground_state(TruncatedBasis{n_max}, p, sea);
    CHECK(gs.converged);
    CHECK(std::fabs(std::sqrt(2.0) * gs.a_mean - X_star) < 3.0 / std::sqrt(static_cast<double>(L)));
  }
}

TEST_CASE("photon distribution: vacuum, parity gaps, normalization") {
  const ModelParams p0(1.0, 1.0, 0.0, 0.0, 10);
  const auto vac = photon_distribution(ground_state(TruncatedBasis{10}, p0, continuum(p0)));
  CHECK(vac[0].p == 1.0);
  CHECK(vac[0].log_p.has_value());
  for (std::size_t n = 1; n < vac.size(); ++n) {
    CHECK(vac[n].p == 0.0);
    CHECK(!vac[n].log_p.has_value());
  }

  const ModelParams p(1.0, 1.0, 1.62, 0.0, 510);
  const auto rows = photon_distribution(ground_state(TruncatedBasis{30}, p, continuum(p)));
  double total = 0.0;
  for (const auto& row : rows) {
    total += row.p;
    if (row.n % 2 == 1) CHECK(!row.log_p.has_value());
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("number-state band: bare limit and Laguerre closed form") {
  std::vector<double> grid;
  for (int i = 0; i < 33; ++i) grid.push_back(kTwoPi * i / 32.0);

  const ModelParams p0(1.0, 1.0, 0.0, 0.0, 60);
  for (const auto& pt : number_state_band(0, grid, p0)) {
    CHECK(pt.e == doctest::Approx(0.5 / 60.0 - 2.0 / M_PI * std::cos(pt.k0)).epsilon(1e-12));
  }

  // The k0 dependence factors out; the depth ratio between curves is the
  // ratio of displacement diagonals, which have closed Laguerre forms.
  const ModelParams p(1.0, 1.0, 2.0, 0.0, 60);
  const double mu2 = p.lambda() * p.lambda();
  const auto band0 = number_state_band(0, grid, p);
  const auto band3 = number_state_band(3, grid, p);
  const double d0 = std::exp(-mu2 / 2.0) * oracles::laguerre(0, mu2);
  const double d3 = std::exp(-mu2 / 2.0) * oracles::laguerre(3, mu2);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double m0 = band0[i].e - p.omega0 * 0.5 / 60.0;
    const double m3 = band3[i].e - p.omega0 * 3.5 / 60.0;
    CHECK(m3 == doctest::Approx(m0 * d3 / d0).epsilon(1e-9));
  }

  // Diagonal matrix elements against the closed form, large basis.
  for (double mu : {0.1, 0.3}) {
    const OperatorCosSin cs = matrix_cos_sin(build_vector_potential(80, mu));
    for (int n : {0, 1, 5}) {
      CHECK(std::fabs(cs.cos(n, n) - std::exp(-mu * mu / 2.0) * oracles::laguerre(n, mu * mu)) <
            1e-8);
    }
  }
}
