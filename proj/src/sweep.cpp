#include "cavchain/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace cavchain {

std::string to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::Bifurcation: return "bifurcation";
    case SweepKind::PhaseGrid: return "phase-grid";
    case SweepKind::Scaling: return "scaling";
    case SweepKind::Distribution: return "distribution";
    case SweepKind::Partition: return "partition";
    case SweepKind::Evolve: return "evolve";
    case SweepKind::Band: return "band";
    default: return "summary";
  }
}

std::string format_cell(const Cell& cell) {
  if (const double* d = std::get_if<double>(&cell)) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  if (const long long* i = std::get_if<long long>(&cell)) {
    return std::to_string(*i);
  }
  return std::get<std::string>(cell);
}

std::string SweepResult::csv() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out << ',';
    out << columns[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_cell(row[i]);
    }
    out << '\n';
  }
  return out.str();
}

double ScanRange::value(int i) const {
  if (steps < 2) return start;
  return start + (stop - start) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

ScanRange parse_scan_range(const std::string& text) {
  ScanRange range;
  const auto first = text.find(':');
  const auto second = text.find(':', first == std::string::npos ? first : first + 1);
  if (first == std::string::npos || second == std::string::npos) {
    throw std::invalid_argument("range '" + text + "' must be start:stop:steps");
  }
  try {
    std::size_t used = 0;
    range.start = std::stod(text.substr(0, first), &used);
    range.stop = std::stod(text.substr(first + 1, second - first - 1), &used);
    range.steps = std::stoi(text.substr(second + 1), &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("range '" + text + "' must be start:stop:steps");
  }
  if (range.steps < 2) throw std::invalid_argument("range '" + text + "' needs at least 2 steps");
  return range;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  const unsigned workers = std::min<unsigned>(threads == 0 ? 1 : threads, static_cast<unsigned>(n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

SweepResult bifurcation_scan(ScanAxis axis, const ScanRange& range, const ModelParams& base,
                             FermiSeaMode mode, unsigned threads) {
  if (range.steps < 2) throw std::invalid_argument("bifurcation_scan: steps must be >= 2");
  base.validate();

  struct PointResult {
    double value = 0.0;
    std::vector<FixedPoint> fps;
    bool on_boundary = false;
  };
  std::vector<PointResult> points(range.steps);

  parallel_for(static_cast<std::size_t>(range.steps), threads, [&](std::size_t i) {
    const double v = range.value(static_cast<int>(i));
    const ModelParams p = axis == ScanAxis::G ? base.with_g(v) : base.with_k0(v);
    const FermiSea sea = fermi_coefficients(p, mode);
    PointResult& pr = points[i];
    pr.value = v;
    pr.fps = find_fixed_points(p, sea);
    for (const FixedPoint& fp : pr.fps) pr.on_boundary = pr.on_boundary || fp.degenerate;
  });

  SweepResult result;
  result.kind = SweepKind::Bifurcation;
  result.columns = {"scan_value", "X_star", "stability", "omega_fluct", "order_param_re"};
  nlohmann::json boundary = nlohmann::json::array();
  for (const PointResult& pr : points) {
    for (const FixedPoint& fp : pr.fps) {
      result.rows.push_back({Cell{pr.value}, Cell{fp.X_star},
                             Cell{std::string(fp.stability == Stability::Center ? "Center" : "Saddle")},
                             Cell{fp.omega_fluct}, Cell{order_parameter(fp).real()}});
    }
    if (pr.on_boundary) boundary.push_back(pr.value);
  }
  result.meta["params"] = params_to_json(base, mode);
  result.meta["axis"] = axis == ScanAxis::G ? "g" : "k0";
  result.meta["on_boundary_points"] = boundary;
  return result;
}

SweepResult phase_grid(const ScanRange& g_range, const ScanRange& k0_range,
                       const ModelParams& base, FermiSeaMode mode, unsigned threads) {
  if (g_range.steps < 2 || k0_range.steps < 2) {
    throw std::invalid_argument("phase_grid: resolution must be >= 2 per axis");
  }
  base.validate();

  const std::size_t n_cells = static_cast<std::size_t>(g_range.steps) * k0_range.steps;
  std::vector<PhaseRegion> cells(n_cells);

  parallel_for(n_cells, threads, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / k0_range.steps;
    const int j = static_cast<int>(idx) % k0_range.steps;
    const ModelParams p = base.with_g(g_range.value(i)).with_k0(k0_range.value(j));
    const FermiSea sea = fermi_coefficients(p, mode);
    cells[idx] = phase_region(p, sea);
    // report the raw grid coordinate, not the reduced k0
    cells[idx].g = g_range.value(i);
    cells[idx].k0 = k0_range.value(j);
  });

  SweepResult result;
  result.kind = SweepKind::PhaseGrid;
  result.columns = {"g", "k0", "n_equilibria", "n_centers", "region_label", "on_boundary"};
  for (const PhaseRegion& cell : cells) {
    result.rows.push_back({Cell{cell.g}, Cell{cell.k0},
                           Cell{static_cast<long long>(cell.n_equilibria)},
                           Cell{static_cast<long long>(cell.n_centers)},
                           Cell{to_string(cell.region_label)},
                           Cell{static_cast<long long>(cell.on_boundary ? 1 : 0)}});
  }
  result.meta["params"] = params_to_json(base, mode);
  return result;
}

ScalingFit scaling_scan(const std::vector<int>& sizes, const ModelParams& base, FermiSeaMode mode,
                        const BasisPolicy& policy, unsigned threads) {
  if (sizes.size() < 3) throw std::invalid_argument("scaling_scan: need at least 3 sizes");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) {
      throw std::invalid_argument("scaling_scan: sizes must be strictly increasing");
    }
  }
  base.validate();

  ScalingFit fit;
  fit.sizes = sizes;
  fit.n_means.resize(sizes.size());
  fit.n_max_used.resize(sizes.size());

  parallel_for(sizes.size(), threads, [&](std::size_t i) {
    const ModelParams p = base.with_L(sizes[i]);
    const FermiSea sea = fermi_coefficients(p, mode);
    int n_max = policy.n_max_start;
    for (;;) {
      const FockGroundState gs = ground_state(TruncatedBasis{n_max}, p, sea);
      if (gs.converged) {
        fit.n_means[i] = gs.n_mean;
        fit.n_max_used[i] = n_max;
        return;
      }
      if (n_max >= policy.n_max_cap) {
        throw ConvergenceError("scaling_scan: ground state not converged at n_max=" +
                               std::to_string(policy.n_max_cap) + " for L=" +
                               std::to_string(sizes[i]));
      }
      n_max = std::min(2 * n_max, policy.n_max_cap);
    }
  });

  for (double n : fit.n_means) {
    if (n <= 1e-12) {
      fit.fitted = false;
      fit.refusal_reason = "no superradiance";
      return fit;
    }
  }

  std::vector<double> log_l, log_n;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    log_l.push_back(std::log(static_cast<double>(sizes[i])));
    log_n.push_back(std::log(fit.n_means[i]));
  }
  const LineFit line = fit_line(log_l, log_n);
  fit.alpha = line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  fit.fitted = true;
  return fit;
}

SweepResult scaling_to_sweep(const ScalingFit& fit) {
  SweepResult result;
  result.kind = SweepKind::Scaling;
  result.columns = {"L", "n_mean", "n_max_used"};
  for (std::size_t i = 0; i < fit.sizes.size(); ++i) {
    result.rows.push_back({Cell{static_cast<long long>(fit.sizes[i])}, Cell{fit.n_means[i]},
                           Cell{static_cast<long long>(fit.n_max_used[i])}});
  }
  result.meta["fitted"] = fit.fitted;
  if (fit.fitted) {
    result.meta["alpha"] = fit.alpha;
    result.meta["intercept"] = fit.intercept;
    result.meta["r_squared"] = fit.r_squared;
  } else {
    result.meta["refusal_reason"] = fit.refusal_reason;
  }
  return result;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line: need matching inputs with at least 2 points");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: abscissae are all equal");

  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double pred = fit.intercept + fit.slope * x[i];
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - my) * (y[i] - my);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
  return fit;
}

}  // namespace cavchain
