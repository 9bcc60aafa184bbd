#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cavchain/cli_app.hpp"

namespace fs = std::filesystem;
using namespace cavchain;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "cavchain_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_quiet(const RunConfig& config) {
  std::ostringstream out, err;
  return run(config, out, err);
}

}  // namespace

TEST_CASE("ground-state run: zero coupling, exit 0, files written") {
  const fs::path dir = fresh_dir("gs_zero");
  RunConfig config;
  config.subcommand = "ground-state";
  config.params = ModelParams(1.0, 1.0, 0.0, 0.0, 10);
  config.n_max = 30;
  config.output_dir = dir.string();
  config.threads = 1;

  std::ostringstream out, err;
  CHECK(run(config, out, err) == 0);
  CHECK(out.str().find("n_mean=0 ") != std::string::npos);

  const nlohmann::json summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary.at("n_mean").get<double>() == 0.0);
  CHECK(summary.at("converged").get<bool>());
  CHECK(fs::exists(dir / "result.csv"));
  CHECK(fs::exists(dir / "meta.json"));
}

TEST_CASE("distribution run: odd rows are absent from the log column") {
  const fs::path dir = fresh_dir("dist_parity");
  RunConfig config;
  config.subcommand = "distribution";
  config.params = ModelParams(1.0, 1.0, 1.62, 0.0, 510);
  config.n_max = 30;
  config.output_dir = dir.string();
  config.threads = 1;
  REQUIRE(run_quiet(config) == 0);

  std::istringstream csv(slurp(dir / "result.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "n,P,logP");
  double total = 0.0;
  while (std::getline(csv, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const int n = std::stoi(line.substr(0, c1));
    const double p = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    const std::string log_field = line.substr(c2 + 1);
    total += p;
    if (n % 2 == 1) {
      CHECK(p == 0.0);
      CHECK(log_field.empty());
    }
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("config echoed into meta re-runs to identical files") {
  const fs::path dir1 = fresh_dir("roundtrip_a");
  RunConfig config;
  config.subcommand = "bifurcation";
  config.params = ModelParams(1.0, 1.0, 0.0, 4.13, 128);
  config.axis = "g";
  config.range = "0:2:9";
  config.output_dir = dir1.string();
  config.threads = 2;
  REQUIRE(run_quiet(config) == 0);

  const nlohmann::json meta = nlohmann::json::parse(slurp(dir1 / "meta.json"));
  RunConfig replay;
  replay.subcommand = meta.at("config").at("subcommand").get<std::string>();
  apply_json_config(replay, meta.at("config"));
  const fs::path dir2 = fresh_dir("roundtrip_b");
  replay.output_dir = dir2.string();
  replay.threads = 1;  // worker count must not leak into outputs
  REQUIRE(run_quiet(replay) == 0);

  CHECK(slurp(dir1 / "result.csv") == slurp(dir2 / "result.csv"));
  CHECK(slurp(dir1 / "summary.json") == slurp(dir2 / "summary.json"));
}

TEST_CASE("config validation: unknown keys, mismatched subcommand, bad ranges") {
  RunConfig config;
  config.subcommand = "bifurcation";

  nlohmann::json j = {{"subcommand", "bifurcation"}, {"bogus_key", 1}};
  CHECK_THROWS_AS(apply_json_config(config, j), ConfigError);

  nlohmann::json mismatched = {{"subcommand", "scaling"}};
  CHECK_THROWS_AS(apply_json_config(config, mismatched), ConfigError);

  nlohmann::json bad_params = {{"params", {{"omega0", -1.0}}}};
  CHECK_THROWS_AS(apply_json_config(config, bad_params), ConfigError);

  RunConfig bad_range;
  bad_range.subcommand = "bifurcation";
  bad_range.range = "零:1:2";
  bad_range.output_dir = fresh_dir("bad_range").string();
  std::ostringstream out, err;
  CHECK_THROWS_AS(run(bad_range, out, err), ConfigError);
}

TEST_CASE("unconverged ground state exits 3 but still writes its files") {
  const fs::path dir = fresh_dir("gs_unconverged");
  RunConfig config;
  config.subcommand = "ground-state";
  config.params = ModelParams(1.0, 1.0, 1.62, 4.13, 100);
  config.n_max = 4;
  config.output_dir = dir.string();
  config.threads = 1;

  std::ostringstream out, err;
  CHECK(run(config, out, err) == 3);
  CHECK(fs::exists(dir / "summary.json"));
  const nlohmann::json error = nlohmann::json::parse(err.str());
  CHECK(error.at("error").at("code").get<int>() == 3);
}

TEST_CASE("phase-diagram run: labels stay in the region alphabet") {
  const fs::path dir = fresh_dir("phase_small");
  RunConfig config;
  config.subcommand = "phase-diagram";
  config.params = ModelParams(1.0, 1.0, 0.0, 0.0, 510);
  config.g_range = "0:3.5:6";
  config.k0_range = "0:6.283185307179586:6";
  config.output_dir = dir.string();
  config.threads = 2;
  REQUIRE(run_quiet(config) == 0);

  std::istringstream csv(slurp(dir / "result.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "g,k0,n_equilibria,n_centers,region_label,on_boundary");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    bool found = false;
    for (const char* label : {"A", "B", "C", "D", "Other"}) {
      if (line.find(std::string(",") + label + ",") != std::string::npos) found = true;
    }
    CHECK(found);
  }
  CHECK(rows == 36);
}

TEST_CASE("scaling refusal reports instead of failing") {
  const fs::path dir = fresh_dir("scaling_refused");
  RunConfig config;
  config.subcommand = "scaling";
  config.params = ModelParams(1.0, 1.0, 0.0, 1.0, 2);
  config.sizes = {10, 20, 40};
  config.output_dir = dir.string();
  config.threads = 1;
  std::ostringstream out, err;
  CHECK(run(config, out, err) == 0);
  CHECK(out.str().find("fit refused") != std::string::npos);
  const nlohmann::json summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary.at("fitted").get<bool>() == false);
}

TEST_CASE("flags override config-file values (full argv path)") {
  const fs::path dir = fresh_dir("flag_override");
  const fs::path cfg_path = dir / "config.json";
  {
    RunConfig file_config;
    file_config.subcommand = "ground-state";
    file_config.params = ModelParams(1.0, 1.0, 1.0, 0.0, 10);
    file_config.n_max = 20;
    std::ofstream out(cfg_path);
    out << config_to_json(file_config).dump(2);
  }
  const std::string out_dir = (dir / "run").string();
  const char* argv[] = {"cavchain", "ground-state", "--config", cfg_path.c_str(),
                        "--g",      "0",            "--output-dir", out_dir.c_str()};
  CHECK(main_cli(8, const_cast<char**>(argv)) == 0);

  const nlohmann::json meta = nlohmann::json::parse(slurp(fs::path(out_dir) / "meta.json"));
  CHECK(meta.at("config").at("params").at("g").get<double>() == 0.0);  // flag wins
  CHECK(meta.at("config").at("n_max").get<int>() == 20);               // file value kept
  const nlohmann::json summary = nlohmann::json::parse(slurp(fs::path(out_dir) / "summary.json"));
  CHECK(summary.at("n_mean").get<double>() == 0.0);
}

TEST_CASE("auto directory name is the subcommand plus the config hash") {
  RunConfig config;
  config.subcommand = "ground-state";
  config.params = ModelParams(1.0, 1.0, 0.0, 0.0, 10);
  const std::string hash = config_hash(config);
  CHECK(hash.size() == 16);

  // The hash covers the science, not where the files land.
  RunConfig moved = config;
  moved.output_dir = "elsewhere";
  CHECK(config_hash(moved) == hash);

  RunConfig different = config;
  different.params = config.params.with_g(2.0);
  CHECK(config_hash(different) != hash);
}
