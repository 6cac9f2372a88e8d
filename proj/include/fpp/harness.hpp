#pragma once

#include <map>
#include <string>
#include <vector>

#include "fpp/analysis.hpp"

namespace fpp {

struct snapshot_version_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct snapshot_corruption_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Binary ball snapshot: versioned, length-prefixed records, little-endian
// 64-bit floats for times, zig-zag varint coordinates, FNV checksum footer.
void snapshot_save(const Ball& ball, const std::string& path);
Ball snapshot_load(const std::string& path);

enum class ExperimentKind {
  holes,
  scaling,
  shape,
  barrel,
  plant,
  sector,
  straightness,
  kesten,
  concentration,
};

const char* experiment_name(ExperimentKind k);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::holes;
  int dim = 2;
  WeightDistribution distribution = WeightDistribution::exponential(1.0);
  uint64_t base_seed = 1;
  int seed_count = 1;
  std::vector<uint64_t> explicit_seeds;  // overrides (base_seed, count) when set
  std::vector<double> t_grid;

  // gadget parameters
  double a = 1.0, b = 2.0, eps = 0.1;
  std::string n_mode = "constant";  // "constant" (n = C11) or "log" (c12 (log t)^(1/d))
  int n = 8;                        // C11 in constant mode
  double c12 = 1.0;                 // log mode coefficient
  double b_prime = 5.0;
  double C18 = 6.0;
  double p = 0.25;
  int scan_window_inflation = -1;   // -1: derived (n + sqrt(n) + 2) for plant, 1 otherwise
  int barrel_mode_samples = 3;      // sampled-mode draws in the barrel experiment

  // probe parameters
  std::vector<double> radii = {50, 100, 200};
  int replicas = 20;
  int kesten_n = 10;
  bool kesten_exact = true;

  uint64_t max_vertices = 60'000'000;
  double max_seconds = 0;  // 0 = unlimited
  int workers = 1;
  std::string out_dir = "out";

  std::vector<uint64_t> seeds() const;
  // every consumed parameter, as written to outputs
  std::vector<std::pair<std::string, std::string>> echo() const;
};

// key = value file with [section] headers; '#' comments
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, ExperimentKind kind_hint,
                                   bool kind_given);

struct SeedStatus {
  uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double seconds = 0;
};

struct RunManifest {
  std::vector<std::pair<std::string, std::string>> config_echo;
  std::vector<SeedStatus> seeds;
  std::vector<std::string> output_files;
  double total_seconds = 0;
  std::string version;
  int exit_code = 0;  // 0 all ok, 2 partial failures

  void write(const std::string& path) const;
};

// Runs the configured experiment across seeds (worker pool), writes CSVs and
// a summary into config.out_dir, and returns the manifest. Per-seed failures
// are recorded without aborting the sweep.
RunManifest run(const ExperimentConfig& config);

inline constexpr const char* kVersionTag = "fpp 1.0.0";

}  // namespace fpp
