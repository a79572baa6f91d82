#include <doctest.h>

#include <cmath>

#include "fsde/noise.hpp"
#include "oracles.hpp"

using namespace fsde;

namespace {

NoiseConfig make_config(double hurst, std::size_t steps, std::uint64_t seed,
                        std::uint64_t rep = 0) {
  NoiseConfig cfg;
  cfg.hurst = hurst;
  cfg.holder_alpha = hurst / 2;
  cfg.horizon = 1.0;
  cfg.steps = steps;
  cfg.seed = seed;
  cfg.replication = rep;
  return cfg;
}

}  // namespace

TEST_SUITE("noise") {

TEST_CASE("fbm covariance values and symmetry") {
  for (double h : {0.3, 0.5, 0.7, 0.9}) CHECK(fbm_covariance(1, 1, h) == doctest::Approx(1.0));
  CHECK(fbm_covariance(1, 2, 0.5) == doctest::Approx(1.0));
  CHECK(fbm_covariance(1, 2, 0.75) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CounterRng rng(11, 0, 0);
  for (int i = 0; i < 50; ++i) {
    const double s = 5 * rng.uniform(), t = 5 * rng.uniform(), h = 0.05 + 0.9 * rng.uniform();
    CHECK(fbm_covariance(s, t, h) == doctest::Approx(fbm_covariance(t, s, h)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(fbm_covariance(1, 1, 1.2), std::invalid_argument);
  CHECK_THROWS_AS(fbm_covariance(-1, 1, 0.5), std::domain_error);
}

TEST_CASE("fbm covariance is positive semidefinite on random grids") {
  CounterRng rng(23, 0, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const double h = 0.1 + 0.8 * rng.uniform();
    std::vector<double> times(8);
    for (double& t : times) t = 0.05 + 3.0 * rng.uniform();
    // Cholesky with a tiny ridge must succeed
    double m[8][8];
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        m[i][j] = fbm_covariance(times[i], times[j], h) + (i == j ? 1e-12 : 0.0);
    bool ok = true;
    for (int i = 0; i < 8 && ok; ++i) {
      for (int j = 0; j <= i; ++j) {
        double s = m[i][j];
        for (int k = 0; k < j; ++k) s -= m[i][k] * m[j][k];
        if (i == j) {
          if (s <= 0) { ok = false; break; }
          m[i][i] = std::sqrt(s);
        } else {
          m[i][j] = s / m[j][j];
        }
      }
    }
    CHECK(ok);
  }
}

TEST_CASE("sample_fbm determinism and origin") {
  const auto cfg = make_config(0.7, 64, 99);
  const auto a = sample_fbm(cfg);
  const auto b = sample_fbm(cfg);
  CHECK(a.values == b.values);
  CHECK(a.values[0] == 0.0);
  CHECK(a.values.size() == 65);
  for (double v : a.values) CHECK(std::isfinite(v));
  // a different replication decorrelates
  const auto c = sample_fbm(make_config(0.7, 64, 99, 1));
  CHECK(c.values != a.values);
}

TEST_CASE("H = 1/2 increments are uncorrelated at lag one") {
  const std::size_t paths = 20000, n = 64;
  double s01 = 0, s0 = 0, s1 = 0, s00 = 0, s11 = 0;
  std::size_t count = 0;
  for (std::size_t rep = 0; rep < paths; ++rep) {
    const auto path = sample_fbm(make_config(0.5, n, 424242, rep));
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double x = path.increments[k], y = path.increments[k + 1];
      s01 += x * y; s0 += x; s1 += y; s00 += x * x; s11 += y * y;
      ++count;
    }
  }
  const double nd = double(count);
  const double cov = s01 / nd - (s0 / nd) * (s1 / nd);
  const double var0 = s00 / nd - (s0 / nd) * (s0 / nd);
  const double var1 = s11 / nd - (s1 / nd) * (s1 / nd);
  const double rho = cov / std::sqrt(var0 * var1);
  CHECK(std::abs(rho) <= 0.02);
}

TEST_CASE("empirical covariance matches the analytic one at H = 0.7") {
  const std::size_t paths = 20000, n = 8;
  double sum_half = 0, sum_full = 0, sum_prod = 0;
  for (std::size_t rep = 0; rep < paths; ++rep) {
    const auto path = sample_fbm(make_config(0.7, n, 31337, rep));
    const double half = path.values[n / 2], full = path.values[n];
    sum_half += half;
    sum_full += full;
    sum_prod += half * full;
  }
  const double cov =
      sum_prod / paths - (sum_half / paths) * (sum_full / paths);
  CHECK(cov == doctest::Approx(fbm_covariance(0.5, 1.0, 0.7)).epsilon(0.03));
  CHECK(std::abs(cov - fbm_covariance(0.5, 1.0, 0.7)) <= 0.02);
}

TEST_CASE("cholesky method agrees with the covariance and enforces its cap") {
  auto cfg = make_config(0.8, 16, 5150);
  cfg.method = FbmMethod::cholesky;
  double sum2 = 0;
  const std::size_t paths = 20000;
  for (std::size_t rep = 0; rep < paths; ++rep) {
    cfg.replication = rep;
    const auto path = sample_fbm(cfg);
    sum2 += path.values[16] * path.values[16];
  }
  CHECK(sum2 / double(paths) == doctest::Approx(1.0).epsilon(0.05));

  cfg.steps = 8192;
  CHECK_THROWS_AS(sample_fbm(cfg), resource_error);
}

TEST_CASE("two-sided path: origin, theta_0, variance at t = -1") {
  auto cfg = make_config(0.7, 8, 777);
  cfg.two_sided = true;
  const auto path = sample_two_sided_fbm(cfg);
  CHECK(path.values.size() == 17);
  CHECK(path.values[path.origin_index()] == 0.0);

  const auto shifted = wiener_shift(path, 0.0);
  CHECK(shifted.values == path.values);

  double sum2 = 0;
  const std::size_t paths = 20000;
  for (std::size_t rep = 0; rep < paths; ++rep) {
    cfg.replication = rep;
    const auto p = sample_two_sided_fbm(cfg);
    sum2 += p.values[0] * p.values[0];  // B_{-1}
  }
  CHECK(std::abs(sum2 / double(paths) - 1.0) <= 0.02);
}

TEST_CASE("wiener shift relocates the origin") {
  auto cfg = make_config(0.6, 16, 2024);
  cfg.two_sided = true;
  const auto path = sample_two_sided_fbm(cfg);
  const double s = 4 * path.dt();
  const auto shifted = wiener_shift(path, s);
  CHECK(shifted.values[shifted.origin_index()] == 0.0);
  CHECK(shifted.horizon == doctest::Approx(path.horizon - s));
  // value at time t of the shifted path equals omega(t+s) - omega(s)
  const double t = 3 * path.dt();
  CHECK(shifted.value_at_time(t) ==
        doctest::Approx(path.value_at_time(t + s) - path.value_at_time(s)).epsilon(1e-12));
  CHECK_THROWS_AS(wiener_shift(path, 0.3 * path.dt()), std::invalid_argument);
}

TEST_CASE("gauss_2f1 basic values") {
  CHECK(gauss_2f1(0.3, 0.7, 1.1, 0.0) == 1.0);
  // identity 2F1(1,1;2;z) = -log(1-z)/z
  CHECK(gauss_2f1(1, 1, 2, -1) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(gauss_2f1(1, 1, 2, -10) == doctest::Approx(std::log(11.0) / 10.0).epsilon(1e-12));
  CHECK_THROWS_AS(gauss_2f1(1, 1, 2, 0.5), std::domain_error);
  CHECK_THROWS_AS(gauss_2f1(1, 1, -2, -0.5), std::invalid_argument);
}

TEST_CASE("gauss_2f1 matches the raw series on [-0.5, 0]") {
  CounterRng rng(8, 0, 0);
  for (int i = 0; i < 60; ++i) {
    const double z = -0.5 * rng.uniform();
    const double a = -1.0 + 2.0 * rng.uniform();
    const double b = -1.0 + 2.0 * rng.uniform();
    const double c = 0.6 + 2.0 * rng.uniform();
    const double lib = gauss_2f1(a, b, c, z);
    const double raw = oracles::hyp2f1_raw_series(a, b, c, z);
    CHECK(lib == doctest::Approx(raw).epsilon(1e-12));
  }
}

TEST_CASE("volterra kernel: indicator, limit, frozen oracle value") {
  CHECK(volterra_kernel(1.0, 1.0, 0.7) == 0.0);
  CHECK(volterra_kernel(1.0, 1.5, 0.7) == 0.0);
  // H -> 1/2 limit: all factors degenerate to 1
  CHECK(volterra_kernel(1.0, 0.5, 0.5001) == doctest::Approx(1.0).epsilon(1e-3));
  // frozen high-precision value for (t, s, H) = (1, 0.5, 0.7)
  const double frozen = 0.97473775260964768;
  CHECK(volterra_kernel(1.0, 0.5, 0.7) == doctest::Approx(frozen).epsilon(1e-8));
  // independent Euler-integral oracle at several abscissae
  for (double s : {0.2, 0.5, 0.8}) {
    const double h = 0.7;
    const double oracle = std::pow(1.0 - s, h - 0.5) / std::tgamma(h + 0.5) *
                          oracles::hyp2f1_euler_integral(0.5 - h, h - 0.5, h + 0.5,
                                                         1.0 - 1.0 / s);
    CHECK(volterra_kernel(1.0, s, h) == doctest::Approx(oracle).epsilon(1e-8));
  }
  CHECK_THROWS_AS(volterra_kernel(1.0, 0.0, 0.7), std::domain_error);
  CHECK_THROWS_AS(volterra_kernel(1.0, 0.5, 0.4), std::invalid_argument);
}

TEST_CASE("coupled generation: determinism, identity limit, variance") {
  auto cfg = make_config(0.7, 256, 555);
  const auto a = coupled_bm_fbm(cfg);
  const auto b = coupled_bm_fbm(cfg);
  CHECK(a.bm_increments == b.bm_increments);
  CHECK(a.fbm.values == b.fbm.values);

  // H -> 1/2: the kernel collapses to 1 and the coupling to the identity
  auto near = make_config(0.5001, 256, 555);
  const auto c = coupled_bm_fbm(near);
  double sup = 0, cum = 0;
  for (std::size_t k = 0; k < 256; ++k) {
    cum += c.bm_increments[k];
    sup = std::max(sup, std::abs(c.fbm.values[k + 1] - cum));
  }
  CHECK(sup <= 1e-2);

  // deterministic part of Var(B_1): the midpoint rule puts it within 3%
  const VolterraCoupling coupling(256, 1.0, 0.7);
  double var_det = 0;
  for (std::size_t j = 0; j < 256; ++j) {
    const double w = coupling.weight(256, j);
    var_det += w * w / 256.0;
  }
  CHECK(var_det == doctest::Approx(0.9913).epsilon(0.002));

  double sum2 = 0;
  const std::size_t paths = 4000;
  for (std::size_t rep = 0; rep < paths; ++rep) {
    const auto p = coupling.sample(555, stream::noise, rep);
    sum2 += p.fbm.values[256] * p.fbm.values[256];
  }
  CHECK(std::abs(sum2 / double(paths) - 1.0) <= 0.05);
}

TEST_CASE("config validation") {
  NoiseConfig cfg;
  cfg.hurst = 0.7;
  cfg.holder_alpha = 0.8;  // above hurst
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.holder_alpha = 0.5;
  cfg.steps = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

}  // TEST_SUITE
