#pragma once

#include <span>
#include <vector>

#include "fsde/drift.hpp"

namespace fsde {

struct EstimationResult {
  double h_hat = 0;
  double sigma_hat = 0;
  double v1 = 0;  // V_{I^1,1} of the transformed series
  double v2 = 0;  // V_{I^2,2}
  std::size_t n = 0;
  double horizon = 0;
};

// k-quadratic variation sum_{i in I} (W_{t_{i+k}} - W_{t_i})^2 over a sorted
// index set; requires k + max(I) <= n where n = values.size() - 1.
double quadratic_variation(std::span<const double> values,
                           std::span<const std::size_t> index_set, std::size_t k);

// I^1 = {0,...,n-1} and I^2 = {2i : 0 <= i <= n/2 - 1}; the largest index
// sets compatible with lags 1 and 2.
std::vector<std::size_t> index_set_full(std::size_t n);
std::vector<std::size_t> index_set_even(std::size_t n);

// h_hat = 1/2 - log(V_{I^1,1}/V_{I^2,2}) / (2 log 2). Strongly consistent for
// the Hurst parameter of the driving fBm when fed the fOU-transformed series.
double hurst_estimator(std::span<const double> y, std::size_t n);

// Moment plug-in: sigma_hat = sqrt(V_{I^1,1} n^{2h-1} / T^{2h}), matching
// E V_{I^1,1} = n sigma^2 (T/n)^{2H} for pure fBm increments.
double sigma_estimator(std::span<const double> y, double h_hat, double horizon,
                       std::size_t n);

// Full pipeline on observations of the singular scheme: apply the discrete
// drift-removing transform, then estimate (H, sigma) on the resulting series.
EstimationResult estimate_from_observations(const DriftSpec& spec,
                                            std::span<const double> x_knots,
                                            double horizon, std::size_t n);

}  // namespace fsde
