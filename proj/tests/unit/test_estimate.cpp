#include <doctest.h>

#include <cmath>

#include "fsde/estimate.hpp"
#include "fsde/noise.hpp"
#include "fsde/scheme.hpp"
#include "oracles.hpp"

using namespace fsde;

namespace {

const DriftSpec kCir(DriftFamily::b1, {1, 1, 1, 2, 0, 0});

FbmPath sample(double hurst, std::size_t steps, std::uint64_t seed, std::uint64_t rep) {
  NoiseConfig cfg;
  cfg.hurst = hurst;
  cfg.holder_alpha = hurst * 0.75;
  cfg.horizon = 1.0;
  cfg.steps = steps;
  cfg.seed = seed;
  cfg.replication = rep;
  return sample_fbm(cfg);
}

}  // namespace

TEST_SUITE("estimate") {

TEST_CASE("quadratic variation basics") {
  // linear path on n = 4: V = 4 (1/4)^2
  const std::vector<double> lin{0.0, 0.25, 0.5, 0.75, 1.0};
  const auto i1 = index_set_full(4);
  CHECK(quadratic_variation(lin, i1, 1) == doctest::Approx(0.25));
  CHECK(quadratic_variation(lin, i1, 0) == 0.0);
  const std::vector<std::size_t> bad{0, 4};
  CHECK_THROWS_AS(quadratic_variation(lin, bad, 1), std::invalid_argument);
}

TEST_CASE("quadratic variation is additive over disjoint index sets") {
  const auto path = sample(0.7, 64, 5, 0);
  const std::vector<std::size_t> a{0, 2, 4, 10}, b{1, 3, 20, 30};
  std::vector<std::size_t> both{0, 1, 2, 3, 4, 10, 20, 30};
  const double sum = quadratic_variation(path.values, a, 2) +
                     quadratic_variation(path.values, b, 2);
  CHECK(quadratic_variation(path.values, both, 2) == doctest::Approx(sum).epsilon(1e-14));
}

TEST_CASE("hurst estimator inverts an engineered variation ratio") {
  // alternating increments a, b chosen so V1/V2 = 2^{1-2H} at H = 0.7
  const double r = std::pow(2.0, 1.0 - 2.0 * 0.7) / 2.0;  // (a^2+b^2)/(a+b)^2 target
  const double a = 1.0;
  const double bq = (2.0 * r + std::sqrt(4.0 * r * r - 4.0 * (1.0 - r) * (1.0 - r))) /
                    (2.0 * (1.0 - r));
  const std::size_t n = 64;
  std::vector<double> y(n + 1);
  for (std::size_t k = 0; k < n; ++k) y[k + 1] = y[k] + (k % 2 ? bq : a);
  CHECK(hurst_estimator(y, n) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("hurst estimator is scale and shift invariant") {
  const auto path = sample(0.6, 256, 77, 0);
  const double h = hurst_estimator(path.values, 256);
  std::vector<double> scaled(path.values.size());
  for (std::size_t k = 0; k < scaled.size(); ++k) scaled[k] = -3.5 * path.values[k] + 11.0;
  CHECK(hurst_estimator(scaled, 256) == doctest::Approx(h).epsilon(1e-12));
}

TEST_CASE("hurst estimator is consistent on pure fBm at desk scale") {
  for (double hurst : {0.5, 0.7}) {
    double sum = 0;
    const std::size_t reps = 10;
    for (std::uint64_t rep = 0; rep < reps; ++rep)
      sum += hurst_estimator(sample(hurst, 4096, 1000, rep).values, 4096);
    CHECK(std::abs(sum / double(reps) - hurst) <= 0.05);
  }
}

TEST_CASE("degenerate inputs are rejected") {
  const std::vector<double> flat(65, 2.0);
  CHECK_THROWS_AS(hurst_estimator(flat, 64), numerical_error);
  CHECK_THROWS_AS(sigma_estimator(flat, 0.7, 1.0, 64), numerical_error);
  CHECK_THROWS_AS(hurst_estimator(flat, 2), std::invalid_argument);
  CHECK_THROWS_AS(estimate_from_observations(kCir, flat, 1.0, 64), numerical_error);
}

TEST_CASE("sigma estimator: homogeneity and consistency") {
  const auto path = sample(0.7, 512, 3, 0);
  const double s = sigma_estimator(path.values, 0.7, 1.0, 512);
  std::vector<double> scaled(path.values.size());
  for (std::size_t k = 0; k < scaled.size(); ++k) scaled[k] = 2.5 * path.values[k];
  CHECK(sigma_estimator(scaled, 0.7, 1.0, 512) == doctest::Approx(2.5 * s).epsilon(1e-12));

  for (double sigma : {1.0, 0.3}) {
    double sum = 0;
    const std::size_t reps = 10;
    for (std::uint64_t rep = 0; rep < reps; ++rep) {
      auto p = sample(0.7, 4096, 2000, rep);
      for (double& v : p.values) v *= sigma;
      sum += sigma_estimator(p.values, 0.7, 1.0, 4096);
    }
    CHECK(sum / double(reps) == doctest::Approx(sigma).epsilon(0.05));
  }
}

TEST_CASE("pipeline equals the direct estimate on the langevin scheme") {
  const TimeGrid grid{1.0, 1024};
  const auto driver = sample(0.7, 1024, 909, 0);
  const auto x = solve_path(kCir, 0.3, 1.0, grid, driver);
  const auto result = estimate_from_observations(kCir, x.knots(), 1.0, 1024);
  const auto y = solve_langevin_path(kCir.growth_R(), 0.3, 1.0, grid, driver);
  CHECK(result.h_hat == doctest::Approx(hurst_estimator(y, 1024)).epsilon(1e-9));
  CHECK(result.v1 > 0);
  CHECK(result.v2 > 0);
  CHECK(result.h_hat ==
        doctest::Approx(0.5 - std::log(result.v1 / result.v2) / (2 * std::log(2.0)))
            .epsilon(1e-14));
}

TEST_CASE("perturbing the drift barely moves the estimate on shared noise") {
  const TimeGrid grid{1.0, 2048};
  const DriftSpec other(DriftFamily::b1, {1.3, 0.8, 1.1, 2, 0, 0});
  double max_gap = 0;
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    const auto driver = sample(0.7, 2048, 5555, rep);
    const auto xa = solve_path(kCir, 0.3, 1.0, grid, driver);
    const auto xb = solve_path(other, 0.3, 1.0, grid, driver);
    const auto ra = estimate_from_observations(kCir, xa.knots(), 1.0, 2048);
    const auto rb = estimate_from_observations(other, xb.knots(), 1.0, 2048);
    max_gap = std::max(max_gap, std::abs(ra.h_hat - rb.h_hat));
  }
  CHECK(max_gap <= 0.02);
}

}  // TEST_SUITE
