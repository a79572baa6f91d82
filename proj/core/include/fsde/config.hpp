#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fsde/drift.hpp"
#include "fsde/noise.hpp"

namespace fsde {

// [section] key = value text format; '#' and ';' start comments.
using IniData = std::map<std::string, std::map<std::string, std::string>>;

IniData parse_ini(const std::string& text);
IniData load_ini(const std::string& path);

// Resolved experiment configuration. Sections: [model], [noise], [grid],
// [mc], and per-subcommand sections [estimate], [ergodic], [pullback],
// [hitting], [convergence], [density], [heston]. Unknown keys are rejected.
struct ExperimentConfig {
  // [model]
  DriftFamily drift = DriftFamily::b1;
  DriftParams params{1.0, 1.0, 1.0, 2.0, 0.0, 0.0};
  double sigma = 0.3;
  double x0 = 1.0;
  // [noise]
  double hurst = 0.7;
  double alpha = 0.55;
  FbmMethod method = FbmMethod::auto_select;
  // [grid]
  double horizon = 1.0;
  std::size_t steps = 1024;
  // [mc]
  std::size_t reps = 100;
  std::uint64_t seed = 12345;
  // [estimate]
  std::string estimate_input;  // optional path CSV; empty = simulate internally
  // [ergodic]
  std::string phi = "clip:10";
  // [pullback]
  std::size_t pullback_n_max = 10;
  std::size_t steps_per_unit = 256;
  // [hitting]
  double t_star = 1.0;
  double hitting_level = 0.0;  // 0 = use the drift root x_b
  // [convergence]
  std::vector<std::size_t> n_list{64, 128, 256, 512, 1024, 2048};
  std::size_t reference_n = 16384;
  // [density]
  std::size_t density_paths = 6000;
  std::size_t mehler_nodes = 4;
  double u_max = 8.0;
  std::size_t bins = 32;
  std::size_t hist_samples = 10000;
  std::size_t hist_bins = 18;
  std::size_t grid_points = 161;
  double density_t = 1.0;
  // [heston]
  double heston_spot = 1.0;
  double heston_z0 = 0.04;
  double heston_v = 0.04;
  double heston_w = 1.0;
  double heston_zeta = 0.2;
  double heston_gamma = 2.0;
  double heston_mu = 0.0;
  double heston_r = 0.0;

  DriftSpec make_drift() const;  // admissibility-checked at [noise] alpha

  // one "key=value ..." line echoing everything that shaped the run
  std::string metadata() const;
};

ExperimentConfig config_from_ini(const IniData& ini);
ExperimentConfig load_config(const std::string& path);

}  // namespace fsde
