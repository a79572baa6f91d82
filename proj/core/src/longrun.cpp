#include "fsde/longrun.hpp"

#include <algorithm>
#include <cmath>

namespace fsde {

std::function<double(double)> phi_from_tag(const std::string& tag) {
  if (tag == "one") return [](double) { return 1.0; };
  if (tag == "identity") return [](double x) { return x; };
  if (tag == "tanh") return [](double x) { return std::tanh(x); };
  if (tag.rfind("clip:", 0) == 0) {
    const double c = std::stod(tag.substr(5));
    return [c](double x) { return std::min(x, c); };
  }
  if (tag.rfind("pow:", 0) == 0) {
    const double p = std::stod(tag.substr(4));
    if (!(p > 0)) throw std::invalid_argument("phi_from_tag: pow exponent <= 0");
    return [p](double x) { return std::pow(x, p); };
  }
  throw std::invalid_argument("phi_from_tag: unknown tag '" + tag + "'");
}

double ergodic_average(const std::string& phi_tag, const EulerPath& path) {
  const auto phi = phi_from_tag(phi_tag);
  const auto& x = path.knots();
  const std::size_t n = path.grid().steps;
  double acc = 0.5 * (phi(x[0]) + phi(x[n]));
  for (std::size_t k = 1; k < n; ++k) acc += phi(x[k]);
  return acc / double(n);  // (dt * trapezoid sum) / T
}

PullbackRun pullback_sequence(const DriftSpec& spec, double sigma, double x0,
                              std::size_t n_max, std::uint64_t seed, double hurst,
                              std::size_t steps_per_unit) {
  if (!(x0 > 0)) throw std::invalid_argument("pullback_sequence: x0 <= 0");
  if (steps_per_unit < 2)
    throw std::invalid_argument("pullback_sequence: steps_per_unit < 2");
  PullbackRun run;
  run.sigma = sigma;
  run.seed = seed;
  run.values.assign(n_max + 1, x0);
  if (n_max == 0) return run;

  NoiseConfig cfg;
  cfg.hurst = hurst;
  cfg.holder_alpha = hurst / 2;
  cfg.horizon = double(n_max);
  cfg.steps = n_max * steps_per_unit;
  cfg.seed = seed;
  cfg.stream = stream::pullback;
  cfg.two_sided = true;
  const FbmPath omega = sample_two_sided_fbm(cfg);
  const std::size_t origin = omega.origin_index();

  for (std::size_t n = 1; n <= n_max; ++n) {
    // driver on [0, n]: omega(t - n) - omega(-n), the theta_{-n} shift
    const std::size_t offset = origin - n * steps_per_unit;
    const std::size_t count = n * steps_per_unit;
    std::vector<double> driver(count + 1);
    for (std::size_t k = 0; k <= count; ++k)
      driver[k] = omega.values[offset + k] - omega.values[offset];
    const TimeGrid grid{double(n), count};
    run.values[n] = solve_path(spec, sigma, x0, grid, driver).knots().back();
  }

  run.gaps.resize(n_max);
  for (std::size_t n = 0; n < n_max; ++n)
    run.gaps[n] = std::abs(run.values[n + 1] - run.values[n]);

  // decay rate from gaps n = 1..n_max-1; gap 0 carries the initial transient
  if (n_max >= 3) {
    std::vector<double> xs, ys;
    for (std::size_t n = 1; n < n_max; ++n) {
      xs.push_back(double(n));
      ys.push_back(std::log(std::max(run.gaps[n], 1e-300)));
    }
    run.fitted_rate = -fit_line(xs, ys).slope;
  } else {
    run.fitted_rate = std::nan("");
  }
  return run;
}

std::optional<double> hitting_time(const EulerPath& path, double level, double t_star) {
  if (!(level > 0)) throw std::invalid_argument("hitting_time: level <= 0");
  const auto& grid = path.grid();
  if (t_star < 0 || t_star > grid.horizon)
    throw std::invalid_argument("hitting_time: t_star outside the horizon");

  const double d_start = path(t_star) - level;
  if (d_start == 0) return t_star;  // already sitting on the level

  const double dt = grid.dt();
  std::size_t k = std::min(std::size_t(t_star / dt), grid.steps - 1);
  double ta = t_star;
  double da = d_start;
  for (; k < grid.steps; ++k, ta = grid.time(k), da = path.knots()[k] - level) {
    const double tb = grid.time(k + 1);
    if (tb <= t_star) continue;
    const double db = path.knots()[k + 1] - level;
    if (da == 0 && ta > t_star) return ta;
    if (db == 0) return tb;  // exact touch at a knot counts
    if (da * db < 0) return std::max(t_star, ta + (tb - ta) * da / (da - db));
  }
  return std::nullopt;
}

ContractionReport contraction_diagnostic(const DriftSpec& spec, double sigma,
                                         std::pair<double, double> x0_pair,
                                         const TimeGrid& grid, const FbmPath& driver) {
  const auto [x0a, x0b] = x0_pair;
  if (!(x0a > 0 && x0b > 0))
    throw std::invalid_argument("contraction_diagnostic: nonpositive start");
  const EulerPath pa = solve_path(spec, sigma, x0a, grid, driver);
  const EulerPath pb = solve_path(spec, sigma, x0b, grid, driver);
  const double dx0 = std::abs(x0a - x0b);
  const double sign0 = (x0a > x0b) ? 1.0 : (x0a < x0b ? -1.0 : 0.0);
  const double K = spec.contraction_K();

  ContractionReport report;
  if (dx0 == 0) {
    report.max_ratio = 0;
    return report;
  }
  for (std::size_t k = 0; k <= grid.steps; ++k) {
    const double d = pa.knots()[k] - pb.knots()[k];
    report.max_ratio =
        std::max(report.max_ratio, std::abs(d) * std::exp(K * grid.time(k)) / dx0);
    if (d * sign0 <= 0) report.ordering_preserved = false;
  }
  return report;
}

}  // namespace fsde
