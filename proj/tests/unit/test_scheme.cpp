#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fsde/scheme.hpp"
#include "oracles.hpp"

using namespace fsde;

namespace {

const DriftSpec kCir(DriftFamily::b1, {1, 1, 1, 2, 0, 0});  // K = R = 1, x_b = 1

NoiseConfig noise_cfg(double hurst, std::size_t steps, std::uint64_t seed,
                      std::uint64_t rep, double horizon = 1.0) {
  NoiseConfig cfg;
  cfg.hurst = hurst;
  cfg.holder_alpha = hurst * 0.75;
  cfg.horizon = horizon;
  cfg.steps = steps;
  cfg.seed = seed;
  cfg.replication = rep;
  return cfg;
}

}  // namespace

TEST_SUITE("scheme") {

TEST_CASE("implicit step: quadratic oracle for gamma = 1") {
  const DriftSpec spec(DriftFamily::b1, {1, 1, 1, 1, 0, 0});
  CHECK(implicit_step(spec, 1.0, 0.1) ==
        doctest::Approx(oracles::quadratic_step_root(1, 1, 1, 1.0, 0.1)).epsilon(1e-12));
  CHECK(implicit_step(spec, 1.0, 0.1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(implicit_step(spec, 0.0, 0.1) ==
        doctest::Approx(oracles::quadratic_step_root(1, 1, 1, 0.0, 0.1)).epsilon(1e-12));
  CHECK(implicit_step(spec, 0.0, 0.1) == doctest::Approx(std::sqrt(0.44) / 2.2).epsilon(1e-9));
}

TEST_CASE("implicit step: positivity and residual over random inputs") {
  CounterRng rng(17, 0, 0);
  const std::vector<DriftSpec> specs{
      kCir, DriftSpec(DriftFamily::b2, {1, 1, 1, 2, 0, 0}),
      DriftSpec(DriftFamily::b1_plus_sin, {1, 1, 1, 2, 0.3, 0.5})};
  for (const auto& spec : specs) {
    for (int i = 0; i < 300; ++i) {
      const double mu = -5.0 + 10.0 * rng.uniform();
      const double dt = 1e-4 + 0.5 * rng.uniform();
      const double x = implicit_step(spec, mu, dt);
      CHECK(x > 0);
      CHECK(std::abs(mu + dt * spec.b(x) - x) <= 1e-12 * std::max(1.0, std::abs(mu)));
    }
  }
}

TEST_CASE("fixed point: zero driver started at the root stays there") {
  const TimeGrid grid{1.0, 128};
  const std::vector<double> flat(grid.steps + 1, 0.0);
  const auto path = solve_path(kCir, 0.3, kCir.root(), grid, flat);
  for (double x : path.knots()) CHECK(x == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("positivity and the a-priori bound hold path by path") {
  const TimeGrid grid{1.0, 1024};
  const double sigma = 0.3, x0 = 1.0;
  for (std::uint64_t rep = 0; rep < 50; ++rep) {
    const auto driver = sample_fbm(noise_cfg(0.7, 1024, 2211, rep));
    const auto path = solve_path(kCir, sigma, x0, grid, driver);
    double sup_w = 0;
    for (double v : driver.values) sup_w = std::max(sup_w, std::abs(v));
    const double bound = x0 + std::abs(kCir.b(x0)) * grid.horizon + 2 * sigma * sup_w;
    for (double x : path.knots()) {
      CHECK(x > 0);
      CHECK(x <= bound + 1e-12);
    }
  }
}

TEST_CASE("lipschitz in the data: exact discrete inequality") {
  const TimeGrid grid{1.0, 256};
  const double sigma = 0.3;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const auto w1 = sample_fbm(noise_cfg(0.7, 256, 88, 2 * rep));
    const auto w2 = sample_fbm(noise_cfg(0.7, 256, 88, 2 * rep + 1));
    CounterRng rng(9, 0, rep);
    const double x1 = 0.2 + 3 * rng.uniform(), x2 = 0.2 + 3 * rng.uniform();
    const auto p1 = solve_path(kCir, sigma, x1, grid, w1);
    const auto p2 = solve_path(kCir, sigma, x2, grid, w2);
    double sup_diff = 0, sup_w = 0;
    for (std::size_t k = 0; k <= grid.steps; ++k) {
      sup_diff = std::max(sup_diff, std::abs(p1.knots()[k] - p2.knots()[k]));
      sup_w = std::max(sup_w, std::abs(w1.values[k] - w2.values[k]));
    }
    CHECK(sup_diff <= std::abs(x1 - x2) + 2 * sigma * sup_w + 1e-9);
  }
}

TEST_CASE("same-noise contraction at the certified rate") {
  const TimeGrid grid{1.0, 4096};
  const double K = kCir.contraction_K();
  for (std::uint64_t rep = 0; rep < 5; ++rep) {
    const auto driver = sample_fbm(noise_cfg(0.7, 4096, 31, rep));
    const auto p1 = solve_path(kCir, 0.3, 0.5, grid, driver);
    const auto p2 = solve_path(kCir, 0.3, 5.0, grid, driver);
    for (std::size_t k = 0; k <= grid.steps; ++k) {
      const double lhs = std::abs(p1.knots()[k] - p2.knots()[k]);
      CHECK(lhs <= 4.5 * std::exp(-K * grid.time(k)) + 1e-3);
      CHECK(p2.knots()[k] > p1.knots()[k]);  // ordering preserved
    }
  }
}

TEST_CASE("negative sigma flips the driver") {
  const TimeGrid grid{1.0, 64};
  const auto driver = sample_fbm(noise_cfg(0.7, 64, 12, 0));
  std::vector<double> flipped(driver.values.size());
  for (std::size_t k = 0; k < flipped.size(); ++k) flipped[k] = -driver.values[k];
  const auto a = solve_path(kCir, -0.3, 1.0, grid, driver.values);
  const auto b = solve_path(kCir, 0.3, 1.0, grid, flipped);
  CHECK(a.knots() == b.knots());
}

TEST_CASE("langevin scheme closed form") {
  const TimeGrid grid{0.1, 1};
  const std::vector<double> still{0.0, 0.0};
  auto y = solve_langevin_path(1.0, 0.5, 1.0, grid, still);
  CHECK(y[1] == doctest::Approx(1.0 / 1.1).epsilon(1e-15));

  // sigma = 0: pure geometric decay
  const TimeGrid grid2{1.0, 50};
  const std::vector<double> flat(51, 0.0);
  y = solve_langevin_path(2.0, 0.0, 3.0, grid2, flat);
  for (std::size_t k = 0; k <= 50; ++k)
    CHECK(y[k] == doctest::Approx(3.0 * std::pow(1.0 + 2.0 * grid2.dt(), -double(k)))
                      .epsilon(1e-12));

  CHECK_THROWS_AS(solve_langevin_path(0.0, 1.0, 1.0, grid, still), std::invalid_argument);
}

TEST_CASE("euler path evaluator interpolates linearly") {
  const TimeGrid grid{1.0, 2};
  const EulerPath path(grid, {1.0, 2.0, 4.0});
  CHECK(path(0.25) == doctest::Approx(1.5));
  CHECK(path(0.75) == doctest::Approx(3.0));
  CHECK(path(1.0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(path(1.5), std::invalid_argument);
  CHECK_THROWS_AS(EulerPath(grid, {1.0, -2.0, 4.0}), std::invalid_argument);
}

TEST_CASE("convergence study: sanity at small scale") {
  const std::vector<std::size_t> ns{64, 128, 256, 512};
  const auto result =
      convergence_study(kCir, 0.3, 1.0, 0.7, 0.55, ns, 4096, 5, 99);
  REQUIRE(result.rows.size() == 4);
  CHECK(result.slope <= -0.3);
  for (std::size_t i = 0; i + 1 < result.rows.size(); ++i)
    CHECK(result.rows[i + 1].median_sup_error <=
          result.rows[i].median_sup_error * 1.05);

  // the reference compared against itself is exact
  const auto self = convergence_study(kCir, 0.3, 1.0, 0.7, 0.55, {512}, 512, 2, 7);
  CHECK(self.rows[0].median_sup_error == 0.0);

  CHECK_THROWS_AS(convergence_study(kCir, 0.3, 1.0, 0.7, 0.55, {48}, 4096, 2, 1),
                  std::invalid_argument);
}

}  // TEST_SUITE
