#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fsde/drift.hpp"
#include "fsde/scheme.hpp"

namespace fsde {

// Registry of uniformly continuous, polynomial-growth test functions:
//   "one", "identity", "clip:<c>" (x min c), "pow:<k>", "tanh".
std::function<double(double)> phi_from_tag(const std::string& tag);

// Time average (1/T) int_0^T phi(X_t) dt by trapezoid quadrature on the grid.
double ergodic_average(const std::string& phi_tag, const EulerPath& path);

struct PullbackRun {
  std::vector<double> values;  // X_n(x0, theta_{-n} omega) for n = 0..n_max
  std::vector<double> gaps;    // |values[n+1] - values[n]|
  double fitted_rate = 0;      // exponential decay rate fitted on gaps 1..n_max-1
  double sigma = 0;
  std::uint64_t seed = 0;
};

// Pullback construction over the Wiener shift: one two-sided driver per seed,
// the scheme restarted on [-n, 0] for each n with the shifted segment as its
// driver. O(n_max^2) solver work by design.
PullbackRun pullback_sequence(const DriftSpec& spec, double sigma, double x0,
                              std::size_t n_max, std::uint64_t seed,
                              double hurst = 0.7, std::size_t steps_per_unit = 256);

// First t > t_star at which the piecewise-linear path reaches the level, by
// sign change between knots with linear interpolation of the crossing time.
// Exact touch counts as a hit; a path sitting on the level at t_star returns
// t_star itself. std::nullopt when the level is never reached.
std::optional<double> hitting_time(const EulerPath& path, double level, double t_star);

struct ContractionReport {
  double max_ratio = 0;            // max_k |dX_{t_k}| e^{K t_k} / |dx0|
  bool ordering_preserved = true;  // x0^1 > x0^2 implies X^1 > X^2 knot-wise
};

ContractionReport contraction_diagnostic(const DriftSpec& spec, double sigma,
                                         std::pair<double, double> x0_pair,
                                         const TimeGrid& grid, const FbmPath& driver);

}  // namespace fsde
