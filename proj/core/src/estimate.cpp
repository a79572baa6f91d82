#include "fsde/estimate.hpp"

#include <cmath>
#include <numeric>

#include "fsde/transform.hpp"

namespace fsde {

double quadratic_variation(std::span<const double> values,
                           std::span<const std::size_t> index_set, std::size_t k) {
  if (values.size() < 2) throw std::invalid_argument("quadratic_variation: short series");
  const std::size_t n = values.size() - 1;
  double sum = 0;
  for (std::size_t i : index_set) {
    if (i + k > n)
      throw std::invalid_argument("quadratic_variation: k + max(I) exceeds n");
    const double d = values[i + k] - values[i];
    sum += d * d;
  }
  return sum;
}

std::vector<std::size_t> index_set_full(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

std::vector<std::size_t> index_set_even(std::size_t n) {
  std::vector<std::size_t> idx(n / 2);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = 2 * i;
  return idx;
}

namespace {

struct VariationPair {
  double v1, v2;
};

VariationPair variation_pair(std::span<const double> y, std::size_t n) {
  if (n < 4) throw std::invalid_argument("hurst_estimator: n >= 4 required");
  if (y.size() != n + 1)
    throw std::invalid_argument("hurst_estimator: series length != n + 1");
  const auto i1 = index_set_full(n);
  const auto i2 = index_set_even(n);
  return {quadratic_variation(y, i1, 1), quadratic_variation(y, i2, 2)};
}

}  // namespace

double hurst_estimator(std::span<const double> y, std::size_t n) {
  const auto [v1, v2] = variation_pair(y, n);
  if (!(v1 > 0) || !(v2 > 0))
    throw numerical_error("hurst_estimator: degenerate input (zero variation)");
  return 0.5 - std::log(v1 / v2) / (2.0 * std::log(2.0));
}

double sigma_estimator(std::span<const double> y, double h_hat, double horizon,
                       std::size_t n) {
  if (!(h_hat > 0 && h_hat < 1))
    throw std::invalid_argument("sigma_estimator: h_hat outside (0,1)");
  if (!(horizon > 0)) throw std::invalid_argument("sigma_estimator: horizon <= 0");
  const auto [v1, v2] = variation_pair(y, n);
  (void)v2;
  if (!(v1 > 0))
    throw numerical_error("sigma_estimator: degenerate input (zero variation)");
  return std::sqrt(v1 * std::pow(double(n), 2.0 * h_hat - 1.0) /
                   std::pow(horizon, 2.0 * h_hat));
}

EstimationResult estimate_from_observations(const DriftSpec& spec,
                                            std::span<const double> x_knots,
                                            double horizon, std::size_t n) {
  if (x_knots.size() != n + 1)
    throw std::invalid_argument("estimate_from_observations: knot count != n + 1");
  // constant observations (a noise-free run) carry no information about (H, sigma)
  bool constant = true;
  for (double x : x_knots)
    if (x != x_knots[0]) { constant = false; break; }
  if (constant)
    throw numerical_error("estimate_from_observations: degenerate input (constant path)");
  const auto y = theta_discrete(spec, x_knots, horizon, n);
  const auto [v1, v2] = variation_pair(y, n);
  if (!(v1 > 0) || !(v2 > 0))
    throw numerical_error("estimate_from_observations: degenerate transformed series");
  EstimationResult result;
  result.v1 = v1;
  result.v2 = v2;
  result.n = n;
  result.horizon = horizon;
  result.h_hat = 0.5 - std::log(v1 / v2) / (2.0 * std::log(2.0));
  result.sigma_hat = std::sqrt(v1 * std::pow(double(n), 2.0 * result.h_hat - 1.0) /
                               std::pow(horizon, 2.0 * result.h_hat));
  return result;
}

}  // namespace fsde
