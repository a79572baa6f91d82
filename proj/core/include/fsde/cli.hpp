#pragma once

#include <string>
#include <vector>

namespace fsde::cli {

// Experiment driver. Subcommands: check-drift, simulate, convergence,
// ergodic, pullback, hitting, estimate, density, heston. Flags: --config,
// --seed, --out, --reps, --tag plus per-subcommand numeric overrides; flags
// take precedence over config-file values. Outputs land in
// <out>/<subcommand>-<tag>.csv with a metadata comment line echoing the
// resolved configuration.
//
// Exit codes: 0 success, 2 invalid config or inadmissible drift,
// 3 numerical failure (root bracketing, embedding, degenerate estimator).
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args without the program name

}  // namespace fsde::cli
