#include "cavchain/cli_app.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "cavchain/fock.hpp"
#include "cavchain/landau.hpp"
#include "cavchain/meanfield.hpp"
#include "cavchain/sweep.hpp"
#include "cavchain/version.hpp"

namespace fs = std::filesystem;

namespace cavchain {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {
      "ground-state", "distribution", "bifurcation", "phase-diagram",
      "scaling",      "partition",    "evolve",      "band"};
  return names;
}

std::vector<std::string> allowed_keys(const std::string& sub) {
  std::vector<std::string> keys = {"subcommand", "params", "output_dir"};
  if (sub == "ground-state" || sub == "distribution") {
    keys.push_back("n_max");
  } else if (sub == "bifurcation") {
    keys.push_back("axis");
    keys.push_back("range");
  } else if (sub == "phase-diagram") {
    keys.push_back("g_range");
    keys.push_back("k0_range");
  } else if (sub == "scaling") {
    keys.push_back("sizes");
  } else if (sub == "partition") {
    keys.push_back("betas");
  } else if (sub == "evolve") {
    keys.push_back("x0");
    keys.push_back("y0");
    keys.push_back("t_end");
    keys.push_back("dt");
  } else if (sub == "band") {
    keys.push_back("n_phot");
    keys.push_back("k0_grid");
  }
  return keys;
}

nlohmann::json error_json(int code, const std::string& message) {
  return nlohmann::json{{"error", {{"code", code}, {"message", message}}}};
}

}  // namespace

nlohmann::json config_to_json(const RunConfig& config) {
  nlohmann::json j;
  j["subcommand"] = config.subcommand;
  j["params"] = params_to_json(config.params, config.mode);
  j["output_dir"] = config.output_dir;
  const std::string& sub = config.subcommand;
  if (sub == "ground-state" || sub == "distribution") {
    j["n_max"] = config.n_max;
  } else if (sub == "bifurcation") {
    j["axis"] = config.axis;
    j["range"] = config.range;
  } else if (sub == "phase-diagram") {
    j["g_range"] = config.g_range;
    j["k0_range"] = config.k0_range;
  } else if (sub == "scaling") {
    j["sizes"] = config.sizes;
  } else if (sub == "partition") {
    j["betas"] = config.betas;
  } else if (sub == "evolve") {
    j["x0"] = config.x0;
    j["y0"] = config.y0;
    j["t_end"] = config.t_end;
    j["dt"] = config.dt;
  } else if (sub == "band") {
    j["n_phot"] = config.n_phot;
    j["k0_grid"] = config.k0_grid;
  }
  return j;
}

void apply_json_config(RunConfig& config, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  const std::vector<std::string> keys = allowed_keys(config.subcommand);
  for (const auto& item : j.items()) {
    if (std::find(keys.begin(), keys.end(), item.key()) == keys.end()) {
      throw ConfigError("unknown config key '" + item.key() + "' for subcommand '" +
                        config.subcommand + "'");
    }
  }
  try {
    if (j.contains("subcommand")) {
      const std::string sub = j.at("subcommand").get<std::string>();
      if (sub != config.subcommand) {
        throw ConfigError("config subcommand '" + sub + "' does not match invoked subcommand '" +
                          config.subcommand + "'");
      }
    }
    if (j.contains("params")) {
      auto [params, mode] = params_from_json(j.at("params"));
      config.params = params;
      config.mode = mode;
    }
    if (j.contains("output_dir")) config.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("n_max")) config.n_max = j.at("n_max").get<int>();
    if (j.contains("axis")) config.axis = j.at("axis").get<std::string>();
    if (j.contains("range")) config.range = j.at("range").get<std::string>();
    if (j.contains("g_range")) config.g_range = j.at("g_range").get<std::string>();
    if (j.contains("k0_range")) config.k0_range = j.at("k0_range").get<std::string>();
    if (j.contains("sizes")) config.sizes = j.at("sizes").get<std::vector<int>>();
    if (j.contains("betas")) config.betas = j.at("betas").get<std::vector<double>>();
    if (j.contains("x0")) config.x0 = j.at("x0").get<double>();
    if (j.contains("y0")) config.y0 = j.at("y0").get<double>();
    if (j.contains("t_end")) config.t_end = j.at("t_end").get<double>();
    if (j.contains("dt")) config.dt = j.at("dt").get<double>();
    if (j.contains("n_phot")) config.n_phot = j.at("n_phot").get<std::vector<int>>();
    if (j.contains("k0_grid")) config.k0_grid = j.at("k0_grid").get<std::string>();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid config value: ") + e.what());
  }
}

std::string config_hash(const RunConfig& config) {
  nlohmann::json j = config_to_json(config);
  j.erase("output_dir");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(j.dump())));
  return buf;
}

namespace {

struct RunOutput {
  SweepResult result;
  nlohmann::json summary;
  std::string line;
  int exit_code = 0;
  std::string error_message;
};

nlohmann::json ground_state_summary(const FockGroundState& gs) {
  return nlohmann::json{{"energy", gs.energy},
                        {"n_mean", gs.n_mean},
                        {"a_mean", gs.a_mean},
                        {"parity_odd_weight", gs.parity_odd_weight},
                        {"converged", gs.converged},
                        {"n_max", gs.n_max}};
}

RunOutput run_ground_state(const RunConfig& config, const FermiSea& sea) {
  if (config.n_max < 1) throw ConfigError("n_max must be at least 1");
  const FockGroundState gs = ground_state(TruncatedBasis{config.n_max}, config.params, sea);

  RunOutput out;
  out.result.kind = SweepKind::Summary;
  out.result.columns = {"energy", "n_mean", "a_mean", "parity_odd_weight", "converged", "n_max"};
  out.result.rows.push_back({Cell{gs.energy}, Cell{gs.n_mean}, Cell{gs.a_mean},
                             Cell{gs.parity_odd_weight},
                             Cell{static_cast<long long>(gs.converged ? 1 : 0)},
                             Cell{static_cast<long long>(gs.n_max)}});
  out.summary = ground_state_summary(gs);
  out.summary["warnings"] = nlohmann::json::array();
  out.line = "ground-state: energy=" + fmt(gs.energy) + " n_mean=" + fmt(gs.n_mean) +
             " a_mean=" + fmt(gs.a_mean) + " parity_odd_weight=" + fmt(gs.parity_odd_weight) +
             " converged=" + (gs.converged ? "1" : "0") + " n_max=" + std::to_string(gs.n_max);
  if (!gs.converged) {
    out.exit_code = 3;
    out.error_message = "ground state not converged at n_max=" + std::to_string(gs.n_max);
  }
  return out;
}

RunOutput run_distribution(const RunConfig& config, const FermiSea& sea) {
  if (config.n_max < 1) throw ConfigError("n_max must be at least 1");
  const FockGroundState gs = ground_state(TruncatedBasis{config.n_max}, config.params, sea);
  const std::vector<DistributionRow> rows = photon_distribution(gs);

  RunOutput out;
  out.result.kind = SweepKind::Distribution;
  out.result.columns = {"n", "P", "logP"};
  for (const DistributionRow& row : rows) {
    out.result.rows.push_back({Cell{static_cast<long long>(row.n)}, Cell{row.p},
                               row.log_p ? Cell{*row.log_p} : Cell{std::string()}});
  }
  out.summary = ground_state_summary(gs);
  out.summary["warnings"] = nlohmann::json::array();
  out.line = "distribution: n_mean=" + fmt(gs.n_mean) + " parity_odd_weight=" +
             fmt(gs.parity_odd_weight) + " rows=" + std::to_string(rows.size()) +
             " converged=" + (gs.converged ? "1" : "0");
  if (!gs.converged) {
    out.exit_code = 3;
    out.error_message = "ground state not converged at n_max=" + std::to_string(gs.n_max);
  }
  return out;
}

RunOutput run_bifurcation(const RunConfig& config, unsigned threads) {
  if (config.axis != "g" && config.axis != "k0") {
    throw ConfigError("axis must be 'g' or 'k0'");
  }
  ScanRange range;
  try {
    range = parse_scan_range(config.range);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  const ScanAxis axis = config.axis == "g" ? ScanAxis::G : ScanAxis::K0;

  RunOutput out;
  out.result = bifurcation_scan(axis, range, config.params, config.mode, threads);
  std::size_t max_branches = 0;
  std::map<double, std::size_t> per_point;
  for (const auto& row : out.result.rows) ++per_point[std::get<double>(row[0])];
  for (const auto& [v, n] : per_point) max_branches = std::max(max_branches, n);
  const std::size_t n_boundary = out.result.meta["on_boundary_points"].size();
  out.summary = {{"points", range.steps},
                 {"rows", out.result.rows.size()},
                 {"max_branches", max_branches},
                 {"on_boundary_points", out.result.meta["on_boundary_points"]},
                 {"warnings", nlohmann::json::array()}};
  if (n_boundary > 0) {
    out.summary["warnings"].push_back("degenerate roots at " + std::to_string(n_boundary) +
                                      " scan points (on a bifurcation boundary)");
  }
  out.line = "bifurcation: axis=" + config.axis + " points=" + std::to_string(range.steps) +
             " max_branches=" + std::to_string(max_branches) +
             " on_boundary=" + std::to_string(n_boundary);
  return out;
}

RunOutput run_phase_diagram(const RunConfig& config, unsigned threads) {
  ScanRange g_range, k0_range;
  try {
    g_range = parse_scan_range(config.g_range);
    k0_range = parse_scan_range(config.k0_range);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }

  RunOutput out;
  out.result = phase_grid(g_range, k0_range, config.params, config.mode, threads);
  std::map<std::string, int> label_counts;
  int boundary = 0;
  for (const auto& row : out.result.rows) {
    ++label_counts[std::get<std::string>(row[4])];
    boundary += static_cast<int>(std::get<long long>(row[5]));
  }
  nlohmann::json regions;
  for (const auto& [label, count] : label_counts) regions[label] = count;
  out.summary = {{"cells", out.result.rows.size()},
                 {"regions", regions},
                 {"on_boundary_cells", boundary},
                 {"warnings", nlohmann::json::array()}};
  if (boundary > 0) {
    out.summary["warnings"].push_back(std::to_string(boundary) +
                                      " cells sit on a region boundary (degenerate root)");
  }
  std::string region_text;
  for (const auto& [label, count] : label_counts) {
    region_text += (region_text.empty() ? "" : ",") + label + ":" + std::to_string(count);
  }
  out.line = "phase-diagram: cells=" + std::to_string(out.result.rows.size()) + " regions{" +
             region_text + "} on_boundary=" + std::to_string(boundary);
  return out;
}

RunOutput run_scaling(const RunConfig& config, unsigned threads) {
  if (config.sizes.size() < 3) throw ConfigError("scaling needs at least 3 sizes");
  for (std::size_t i = 1; i < config.sizes.size(); ++i) {
    if (config.sizes[i] <= config.sizes[i - 1]) {
      throw ConfigError("sizes must be strictly increasing");
    }
  }
  const ScalingFit fit = scaling_scan(config.sizes, config.params, config.mode, {}, threads);

  RunOutput out;
  out.result = scaling_to_sweep(fit);
  out.result.meta["params"] = params_to_json(config.params, config.mode);
  out.summary = {{"fitted", fit.fitted}, {"warnings", nlohmann::json::array()}};
  if (fit.fitted) {
    out.summary["alpha"] = fit.alpha;
    out.summary["intercept"] = fit.intercept;
    out.summary["r_squared"] = fit.r_squared;
    out.line = "scaling: alpha=" + fmt(fit.alpha) + " r_squared=" + fmt(fit.r_squared) +
               " sizes=" + std::to_string(fit.sizes.size());
  } else {
    out.summary["refusal_reason"] = fit.refusal_reason;
    out.line = "scaling: fit refused (" + fit.refusal_reason + ")";
  }
  return out;
}

RunOutput run_partition(const RunConfig& config, const FermiSea& sea) {
  if (config.betas.empty()) throw ConfigError("partition needs at least one beta");
  std::vector<double> betas = config.betas;
  std::sort(betas.begin(), betas.end());
  for (double beta : betas) {
    if (!(beta > 0.0)) throw ConfigError("beta values must be positive");
  }

  RunOutput out;
  out.result.kind = SweepKind::Partition;
  out.result.columns = {"beta",       "Z_numeric",    "Z_laplace",   "free_energy",
                        "dominant_x", "ln_Z_numeric", "ln_Z_laplace"};
  bool degenerate = false;
  double dominant_x = 0.0;
  for (double beta : betas) {
    const PartitionResult pr = partition_function(config.params, sea, beta);
    degenerate = degenerate || pr.laplace_degenerate;
    dominant_x = pr.dominant_x;
    out.result.rows.push_back({Cell{pr.beta}, Cell{pr.Z_numeric}, Cell{pr.Z_laplace},
                               Cell{pr.free_energy}, Cell{pr.dominant_x}, Cell{pr.ln_Z_numeric},
                               Cell{pr.ln_Z_laplace}});
  }
  out.summary = {{"betas", betas},
                 {"dominant_x", dominant_x},
                 {"warnings", nlohmann::json::array()}};
  if (degenerate) {
    out.summary["warnings"].push_back("degenerate minima: the Laplace approximation is invalid");
  }
  out.line = "partition: betas=" + std::to_string(betas.size()) +
             " dominant_x=" + fmt(dominant_x);
  return out;
}

RunOutput run_evolve(const RunConfig& config, const FermiSea& sea) {
  if (!std::isfinite(config.x0) || !std::isfinite(config.y0)) {
    throw ConfigError("x0 and y0 must be finite");
  }
  if (!(config.dt > 0.0) || !(config.t_end > 0.0)) {
    throw ConfigError("dt and t_end must be positive");
  }
  const std::vector<QuadratureState> traj =
      evolve({config.x0, config.y0, 0.0}, config.params, sea, config.t_end, config.dt);

  RunOutput out;
  out.result.kind = SweepKind::Evolve;
  out.result.columns = {"t", "X", "Y", "energy"};
  const double E0 = mean_field_energy_surface(traj.front().X, traj.front().Y, config.params, sea);
  double drift = 0.0;
  for (const QuadratureState& s : traj) {
    const double E = mean_field_energy_surface(s.X, s.Y, config.params, sea);
    drift = std::max(drift, std::fabs(E - E0));
    out.result.rows.push_back({Cell{s.t}, Cell{s.X}, Cell{s.Y}, Cell{E}});
  }
  const double rel_drift = E0 != 0.0 ? drift / std::fabs(E0) : drift;
  out.summary = {{"steps", traj.size() - 1},
                 {"energy_drift_rel", rel_drift},
                 {"warnings", nlohmann::json::array()}};
  out.line = "evolve: steps=" + std::to_string(traj.size() - 1) +
             " energy_drift_rel=" + fmt(rel_drift);
  return out;
}

RunOutput run_band(const RunConfig& config) {
  if (config.n_phot.empty()) throw ConfigError("band needs at least one n_phot value");
  for (int n : config.n_phot) {
    if (n < 0) throw ConfigError("n_phot values must be nonnegative");
  }
  ScanRange grid;
  try {
    grid = parse_scan_range(config.k0_grid);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  std::vector<double> k0s;
  for (int i = 0; i < grid.steps; ++i) k0s.push_back(grid.value(i));

  RunOutput out;
  out.result.kind = SweepKind::Band;
  out.result.columns = {"n_phot", "k0", "e"};
  for (int n : config.n_phot) {
    const std::vector<BandPoint> band = number_state_band(n, k0s, config.params);
    for (const BandPoint& pt : band) {
      out.result.rows.push_back({Cell{static_cast<long long>(n)}, Cell{pt.k0}, Cell{pt.e}});
    }
  }
  out.summary = {{"curves", config.n_phot.size()},
                 {"points_per_curve", grid.steps},
                 {"warnings", nlohmann::json::array()}};
  out.line = "band: curves=" + std::to_string(config.n_phot.size()) +
             " points_per_curve=" + std::to_string(grid.steps);
  return out;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (std::find(subcommands().begin(), subcommands().end(), config.subcommand) ==
      subcommands().end()) {
    throw ConfigError("unknown subcommand '" + config.subcommand + "'");
  }
  try {
    config.params.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  const unsigned threads =
      config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  const FermiSea sea = fermi_coefficients(config.params, config.mode);

  RunOutput result;
  if (config.subcommand == "ground-state") {
    result = run_ground_state(config, sea);
  } else if (config.subcommand == "distribution") {
    result = run_distribution(config, sea);
  } else if (config.subcommand == "bifurcation") {
    result = run_bifurcation(config, threads);
  } else if (config.subcommand == "phase-diagram") {
    result = run_phase_diagram(config, threads);
  } else if (config.subcommand == "scaling") {
    result = run_scaling(config, threads);
  } else if (config.subcommand == "partition") {
    result = run_partition(config, sea);
  } else if (config.subcommand == "evolve") {
    result = run_evolve(config, sea);
  } else {
    result = run_band(config);
  }

  fs::path dir;
  if (!config.output_dir.empty()) {
    dir = config.output_dir;
  } else {
    const char* root_env = std::getenv("CAVCHAIN_OUTPUT_ROOT");
    const fs::path root = root_env != nullptr ? fs::path(root_env) : fs::path("runs");
    dir = root / (config.subcommand + "-" + config_hash(config));
  }
  fs::create_directories(dir);

  nlohmann::json meta;
  meta["tool"] = kToolName;
  meta["version"] = kVersion;
  meta["config"] = config_to_json(config);
  meta["config_hash"] = config_hash(config);
  meta["scan"] = result.result.meta;

  write_file(dir / "result.csv", result.result.csv());
  write_file(dir / "meta.json", meta.dump(2) + "\n");
  write_file(dir / "summary.json", result.summary.dump(2) + "\n");

  out << result.line << " -> " << dir.string() << "\n";
  if (result.exit_code != 0) {
    err << error_json(result.exit_code, result.error_message).dump() << "\n";
  }
  return result.exit_code;
}

namespace {

struct RawFlags {
  std::string config_path;
  double omega0 = 1.0, t_h = 1.0, g = 0.0, k0 = 0.0;
  int L = 2;
  std::string fermi_mode = "continuum";
  int n_max = 30;
  std::string axis = "g";
  std::string range;
  std::string g_range;
  std::string k0_range;
  std::vector<int> sizes;
  std::vector<double> betas;
  std::vector<int> n_phot;
  double x0 = 1.0, y0 = 0.0, t_end = 100.0, dt = 1e-3;
  std::string k0_grid;
  std::string output_dir;
  unsigned threads = 0;
};

void add_common_options(CLI::App* sub, RawFlags& raw, bool numeric_g_k0) {
  sub->add_option("--omega0", raw.omega0, "cavity frequency");
  sub->add_option("--t-h", raw.t_h, "hopping energy");
  if (numeric_g_k0) {
    sub->add_option("--g", raw.g, "light-matter coupling");
    sub->add_option("--k0", raw.k0, "Fermi-sea center (radians)");
  }
  sub->add_option("--L", raw.L, "chain length (sites)");
  sub->add_option("--fermi-mode", raw.fermi_mode, "continuum|discrete");
  sub->add_option("--output-dir", raw.output_dir, "exact run directory (default: auto)");
  sub->add_option("--threads", raw.threads, "worker pool size (0 = machine parallelism)");
  sub->add_option("--config", raw.config_path, "JSON config file; flags override its values");
}

}  // namespace

int main_cli(int argc, char** argv) {
  CLI::App app{"Superradiant phase transitions of a tight-binding chain coupled to a cavity mode"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  RawFlags raw;

  CLI::App* gs = app.add_subcommand("ground-state", "exact photon ground state and observables");
  add_common_options(gs, raw, true);
  gs->add_option("--n-max", raw.n_max, "Fock truncation");

  CLI::App* dist = app.add_subcommand("distribution", "photon-number distribution of the ground state");
  add_common_options(dist, raw, true);
  dist->add_option("--n-max", raw.n_max, "Fock truncation");

  CLI::App* bif = app.add_subcommand("bifurcation", "fixed-point branches along a g or k0 scan");
  add_common_options(bif, raw, true);
  bif->add_option("--axis", raw.axis, "scan axis: g or k0");
  bif->add_option("--range", raw.range, "scan range start:stop:steps");

  CLI::App* phase = app.add_subcommand("phase-diagram", "equilibrium-count regions over a (g, k0) grid");
  add_common_options(phase, raw, false);
  phase->add_option("--g,--g-range", raw.g_range, "g range start:stop:steps");
  phase->add_option("--k0,--k0-range", raw.k0_range, "k0 range start:stop:steps");

  CLI::App* scal = app.add_subcommand("scaling", "photon-number scaling <n> ~ L^alpha across sizes");
  add_common_options(scal, raw, true);
  scal->add_option("--sizes", raw.sizes, "chain sizes, strictly increasing")->delimiter(',');

  CLI::App* part = app.add_subcommand("partition", "coherent-state partition function on a beta ladder");
  add_common_options(part, raw, true);
  part->add_option("--betas", raw.betas, "inverse temperatures")->delimiter(',');

  CLI::App* evo = app.add_subcommand("evolve", "mean-field quadrature trajectory");
  add_common_options(evo, raw, true);
  evo->add_option("--x0", raw.x0, "initial X quadrature");
  evo->add_option("--y0", raw.y0, "initial Y quadrature");
  evo->add_option("--t-end", raw.t_end, "integration time");
  evo->add_option("--dt", raw.dt, "integrator step");

  CLI::App* band = app.add_subcommand("band", "per-site energy of photon number states over k0");
  add_common_options(band, raw, true);
  band->add_option("--n-phot", raw.n_phot, "photon number states")->delimiter(',');
  band->add_option("--k0-grid", raw.k0_grid, "k0 grid start:stop:steps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << error_json(2, e.what()).dump() << "\n";
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  RunConfig config;
  config.subcommand = sub->get_name();

  try {
    if (sub->count("--config") > 0) {
      std::ifstream in(raw.config_path);
      if (!in) throw ConfigError("cannot read config file '" + raw.config_path + "'");
      nlohmann::json j;
      try {
        in >> j;
      } catch (const std::exception& e) {
        throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
      }
      apply_json_config(config, j);
    }

    auto given = [&](const char* name) { return sub->count(name) > 0; };
    if (given("--omega0")) config.params.omega0 = raw.omega0;
    if (given("--t-h")) config.params.t_h = raw.t_h;
    if (sub->get_option_no_throw("--g") != nullptr && given("--g") &&
        config.subcommand != "phase-diagram") {
      config.params.g = raw.g;
    }
    if (sub->get_option_no_throw("--k0") != nullptr && given("--k0") &&
        config.subcommand != "phase-diagram") {
      config.params.k0 = raw.k0;
    }
    if (given("--L")) config.params.L = raw.L;
    if (given("--fermi-mode")) config.mode = fermi_mode_from_string(raw.fermi_mode);
    if (given("--output-dir")) config.output_dir = raw.output_dir;
    if (given("--threads")) config.threads = raw.threads;
    if (sub->get_option_no_throw("--n-max") != nullptr && given("--n-max")) config.n_max = raw.n_max;
    if (config.subcommand == "bifurcation") {
      if (given("--axis")) config.axis = raw.axis;
      if (given("--range")) config.range = raw.range;
    }
    if (config.subcommand == "phase-diagram") {
      if (given("--g")) config.g_range = raw.g_range;
      if (given("--k0")) config.k0_range = raw.k0_range;
    }
    if (config.subcommand == "scaling" && given("--sizes")) config.sizes = raw.sizes;
    if (config.subcommand == "partition" && given("--betas")) config.betas = raw.betas;
    if (config.subcommand == "evolve") {
      if (given("--x0")) config.x0 = raw.x0;
      if (given("--y0")) config.y0 = raw.y0;
      if (given("--t-end")) config.t_end = raw.t_end;
      if (given("--dt")) config.dt = raw.dt;
    }
    if (config.subcommand == "band") {
      if (given("--n-phot")) config.n_phot = raw.n_phot;
      if (given("--k0-grid")) config.k0_grid = raw.k0_grid;
    }

    // Normalize: k0 reduced, fields validated.
    config.params = ModelParams(config.params.omega0, config.params.t_h, config.params.g,
                                config.params.k0, config.params.L);

    return run(config, std::cout, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << error_json(2, e.what()).dump() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << error_json(2, e.what()).dump() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << error_json(3, e.what()).dump() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << error_json(1, e.what()).dump() << "\n";
    return 1;
  }
}

}  // namespace cavchain
