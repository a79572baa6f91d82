#include "fsde/scheme.hpp"

#include <algorithm>
#include <cmath>

namespace fsde {

void TimeGrid::validate() const {
  if (!(horizon > 0)) throw std::invalid_argument("TimeGrid: horizon <= 0");
  if (steps < 1) throw std::invalid_argument("TimeGrid: steps < 1");
}

EulerPath::EulerPath(TimeGrid grid, std::vector<double> knots)
    : grid_(grid), knots_(std::move(knots)) {
  grid_.validate();
  if (knots_.size() != grid_.steps + 1)
    throw std::invalid_argument("EulerPath: knot count != steps + 1");
  for (double x : knots_)
    if (!(x > 0)) throw std::invalid_argument("EulerPath: nonpositive knot");
}

double EulerPath::operator()(double t) const {
  const double pos = t / grid_.dt();
  if (pos < 0 || t > grid_.horizon * (1.0 + 1e-12))
    throw std::invalid_argument("EulerPath: time outside [0, T]");
  const std::size_t k = std::min(std::size_t(pos), grid_.steps - 1);
  const double frac = pos - double(k);
  return knots_[k] * (1.0 - frac) + knots_[k + 1] * frac;
}

double EulerPath::sup() const {
  return *std::max_element(knots_.begin(), knots_.end());
}

double implicit_step(const DriftSpec& spec, double mu, double dt, double hint) {
  if (!(dt > 0)) throw std::invalid_argument("implicit_step: dt <= 0");
  auto phi = [&](double x) { return mu + dt * spec.b(x) - x; };

  double lo, hi;
  double start = (hint > 0) ? hint : 1.0;
  const double p0 = phi(start);
  if (p0 == 0) return start;
  if (p0 > 0) {
    lo = start;
    hi = start;
    int guard = 0;
    do {
      hi *= 2;
      if (++guard > 200) throw numerical_error("implicit_step: no upper bracket");
    } while (phi(hi) >= 0);
  } else {
    hi = start;
    lo = start;
    int guard = 0;
    do {
      lo /= 2;
      if (lo < 1e-290) throw numerical_error("implicit_step: no lower bracket");
      if (++guard > 200) throw numerical_error("implicit_step: no lower bracket");
    } while (phi(lo) <= 0);
  }

  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) > 0 ? lo : hi) = mid;
  }
  // one Newton polish; phi' = dt*bdot - 1 <= -1 so the step is well scaled
  double x = 0.5 * (lo + hi);
  const double dphi = dt * spec.b_dot(x) - 1.0;
  x -= phi(x) / dphi;
  return std::clamp(x, lo, hi);
}

double implicit_step(const DriftSpec& spec, double mu, double dt) {
  const double hint = (mu > 0) ? mu : spec.root();
  return implicit_step(spec, mu, dt, hint);
}

EulerPath solve_path(const DriftSpec& spec, double sigma, double x0,
                     const TimeGrid& grid, std::span<const double> driver_values) {
  grid.validate();
  if (!(x0 > 0)) throw std::invalid_argument("solve_path: x0 <= 0");
  if (driver_values.size() != grid.steps + 1)
    throw std::invalid_argument("solve_path: driver not sampled on the grid");
  // sigma in R*: negative sigma is distributionally a driver flip
  double sgn = 1.0;
  if (sigma < 0) {
    sigma = -sigma;
    sgn = -1.0;
  }
  const double dt = grid.dt();
  std::vector<double> knots(grid.steps + 1);
  knots[0] = x0;
  for (std::size_t k = 0; k < grid.steps; ++k) {
    const double dw = sgn * (driver_values[k + 1] - driver_values[k]);
    knots[k + 1] = implicit_step(spec, knots[k] + sigma * dw, dt, knots[k]);
  }
  return EulerPath(grid, std::move(knots));
}

EulerPath solve_path(const DriftSpec& spec, double sigma, double x0,
                     const TimeGrid& grid, const FbmPath& driver) {
  if (driver.two_sided)
    throw std::invalid_argument("solve_path: one-sided driver required");
  if (driver.steps != grid.steps ||
      std::abs(driver.horizon - grid.horizon) > 1e-9 * grid.horizon)
    throw std::invalid_argument("solve_path: driver grid mismatch");
  return solve_path(spec, sigma, x0, grid, driver.values);
}

std::vector<double> solve_langevin_path(double R, double sigma, double y0,
                                        const TimeGrid& grid,
                                        std::span<const double> driver_values) {
  grid.validate();
  if (!(R > 0)) throw std::invalid_argument("solve_langevin_path: R <= 0");
  if (driver_values.size() != grid.steps + 1)
    throw std::invalid_argument("solve_langevin_path: driver not sampled on the grid");
  double sgn = 1.0;
  if (sigma < 0) {
    sigma = -sigma;
    sgn = -1.0;
  }
  const double denom = 1.0 + R * grid.dt();
  std::vector<double> y(grid.steps + 1);
  y[0] = y0;
  for (std::size_t k = 0; k < grid.steps; ++k) {
    const double dw = sgn * (driver_values[k + 1] - driver_values[k]);
    y[k + 1] = (y[k] + sigma * dw) / denom;
  }
  return y;
}

std::vector<double> solve_langevin_path(double R, double sigma, double y0,
                                        const TimeGrid& grid, const FbmPath& driver) {
  if (driver.two_sided)
    throw std::invalid_argument("solve_langevin_path: one-sided driver required");
  if (driver.steps != grid.steps ||
      std::abs(driver.horizon - grid.horizon) > 1e-9 * grid.horizon)
    throw std::invalid_argument("solve_langevin_path: driver grid mismatch");
  return solve_langevin_path(R, sigma, y0, grid, driver.values);
}

namespace {

bool power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

}  // namespace

ConvergenceResult convergence_study(const DriftSpec& spec, double sigma, double x0,
                                    double hurst, double alpha,
                                    const std::vector<std::size_t>& n_list,
                                    std::size_t reference_n, std::size_t reps,
                                    std::uint64_t seed, double horizon) {
  if (n_list.empty()) throw std::invalid_argument("convergence_study: empty n_list");
  if (!(alpha > 0 && alpha < hurst))
    throw std::invalid_argument("convergence_study: need 0 < alpha < hurst");
  if (reps < 1) throw std::invalid_argument("convergence_study: reps < 1");
  for (std::size_t n : n_list) {
    if (n < 2 || reference_n % n != 0 || !power_of_two(reference_n / n))
      throw std::invalid_argument(
          "convergence_study: reference_n must be a power-of-two multiple of every n");
  }

  // errors[rep][i] = sup over the fine grid for n_list[i]
  std::vector<std::vector<double>> errors(reps, std::vector<double>(n_list.size()));
  const TimeGrid fine_grid{horizon, reference_n};

  parallel_for(reps, [&](std::size_t rep) {
    NoiseConfig cfg;
    cfg.hurst = hurst;
    cfg.holder_alpha = alpha;
    cfg.horizon = horizon;
    cfg.steps = reference_n;
    cfg.seed = seed;
    cfg.stream = stream::convergence;
    cfg.replication = rep;
    const FbmPath fine = sample_fbm(cfg);
    const EulerPath ref = solve_path(spec, sigma, x0, fine_grid, fine);

    for (std::size_t i = 0; i < n_list.size(); ++i) {
      const std::size_t n = n_list[i];
      const std::size_t r = reference_n / n;
      std::vector<double> coarse_values(n + 1, 0.0);
      for (std::size_t k = 0; k < n; ++k)
        coarse_values[k + 1] = fine.values[(k + 1) * r];
      const TimeGrid grid{horizon, n};
      const EulerPath coarse = solve_path(spec, sigma, x0, grid, coarse_values);

      // both paths are linear between fine knots, so the sup lives there
      double sup = 0;
      for (std::size_t k = 0; k <= reference_n; ++k) {
        const double t = fine_grid.time(k);
        sup = std::max(sup, std::abs(coarse(t) - ref.knots()[k]));
      }
      errors[rep][i] = sup;
    }
  });

  ConvergenceResult result;
  std::vector<double> log_n, log_med;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    std::vector<double> errs(reps);
    for (std::size_t rep = 0; rep < reps; ++rep) errs[rep] = errors[rep][i];
    ConvergenceRow row;
    row.n = n_list[i];
    row.median_sup_error = median(errs);
    row.q25 = quantile(errs, 0.25);
    row.q75 = quantile(errs, 0.75);
    result.rows.push_back(row);
    log_n.push_back(std::log(double(n_list[i])));
    log_med.push_back(std::log(std::max(row.median_sup_error, 1e-300)));
  }
  result.slope = fit_line(log_n, log_med).slope;
  return result;
}

}  // namespace fsde
