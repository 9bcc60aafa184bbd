#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "cavchain/model.hpp"

namespace cavchain {

// Invalid configuration (unknown key, malformed range, out-of-range value).
// The CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Fully resolved run description: defaults, then config file values, then
// command-line flags. Everything a run computes is determined by this
// struct; there is no random state.
struct RunConfig {
  std::string subcommand;
  ModelParams params;
  FermiSeaMode mode = FermiSeaMode::ContinuumHalfFilled;

  int n_max = 30;                      // ground-state, distribution
  std::string axis = "g";              // bifurcation
  std::string range = "0:3:31";        // bifurcation
  std::string g_range = "0:3.5:64";    // phase-diagram
  std::string k0_range = "0:6.283185307179586:64";  // phase-diagram
  std::vector<int> sizes = {60, 120, 240, 480};     // scaling
  std::vector<double> betas = {1, 4, 16, 64};       // partition
  double x0 = 1.0;                     // evolve
  double y0 = 0.0;
  double t_end = 100.0;
  double dt = 1e-3;
  std::vector<int> n_phot = {0, 1, 2, 3};  // band
  std::string k0_grid = "0:6.283185307179586:129";  // band

  std::string output_dir;  // empty: auto directory under the output root
  unsigned threads = 0;    // 0: machine parallelism
};

// Science-only echo of the config (no execution knobs); this is what lands
// in meta.json under "config" and what the run directory hash covers.
nlohmann::json config_to_json(const RunConfig& config);

// Merge a config file into `config`, rejecting unknown keys and a mismatched
// "subcommand" value.
void apply_json_config(RunConfig& config, const nlohmann::json& j);

// 64-bit FNV-1a of the canonical config dump, as 16 hex digits.
std::string config_hash(const RunConfig& config);

// Execute one run: validates, computes, writes result.csv / meta.json /
// summary.json into the run directory, prints a one-line summary to `out`.
// Returns the process exit code (0 ok, 3 unconverged); throws ConfigError
// for invalid configs and ConvergenceError when a scan cannot converge.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Full command-line entry point (argument parsing plus run()).
int main_cli(int argc, char** argv);

}  // namespace cavchain
