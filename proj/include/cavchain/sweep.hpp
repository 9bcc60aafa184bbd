#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "cavchain/fock.hpp"
#include "cavchain/meanfield.hpp"
#include "cavchain/model.hpp"

namespace cavchain {

enum class SweepKind { Bifurcation, PhaseGrid, Scaling, Distribution, Partition, Evolve, Band, Summary };

std::string to_string(SweepKind kind);

// A CSV cell. Doubles are printed with 17 significant digits so files are
// reproducible bit for bit; an empty string renders as an empty field.
using Cell = std::variant<double, long long, std::string>;

std::string format_cell(const Cell& cell);

// Tabular result of a parameter scan with enough metadata to re-execute it.
struct SweepResult {
  SweepKind kind = SweepKind::Summary;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::json meta;

  std::string csv() const;
};

// Inclusive scan range with `steps` points; parsed from "start:stop:steps".
struct ScanRange {
  double start = 0.0;
  double stop = 0.0;
  int steps = 2;

  double value(int i) const;
};

ScanRange parse_scan_range(const std::string& text);

// Run body(0..n-1) on a bounded worker pool. Results must be written into
// pre-assigned slots by index, which keeps outputs identical for any worker
// count. Exceptions from workers are rethrown on the calling thread.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

enum class ScanAxis { G, K0 };

// Fixed points with stability and order parameter at every point of a
// one-parameter scan. Columns: scan_value, X_star, stability, omega_fluct,
// order_param_re. Degenerate-root diagnoses are propagated through
// meta["on_boundary_points"].
SweepResult bifurcation_scan(ScanAxis axis, const ScanRange& range, const ModelParams& base,
                             FermiSeaMode mode, unsigned threads = 1);

// Equilibrium-count classification over a (g, k0) grid. Columns: g, k0,
// n_equilibria, n_centers, region_label, on_boundary.
SweepResult phase_grid(const ScanRange& g_range, const ScanRange& k0_range,
                       const ModelParams& base, FermiSeaMode mode, unsigned threads = 1);

// Ground states across chain sizes with the basis auto-escalated (start at
// n_max_start, double until converged, hard cap with explicit failure), then
// a least-squares line on (ln L, ln <n>).
struct BasisPolicy {
  int n_max_start = 30;
  int n_max_cap = 960;
};

struct ScalingFit {
  std::vector<int> sizes;
  std::vector<double> n_means;
  std::vector<int> n_max_used;
  double alpha = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  bool fitted = false;
  std::string refusal_reason;  // set when the fit is refused
};

ScalingFit scaling_scan(const std::vector<int>& sizes, const ModelParams& base, FermiSeaMode mode,
                        const BasisPolicy& policy = {}, unsigned threads = 1);

SweepResult scaling_to_sweep(const ScalingFit& fit);

// Ordinary least squares y = intercept + slope x with the coefficient of
// determination. r_squared is defined as 1 when the data are exactly
// constant and exactly reproduced.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cavchain
