#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fsde/drift.hpp"
#include "fsde/noise.hpp"

namespace fsde {

struct TimeGrid {
  double horizon = 1.0;    // T
  std::size_t steps = 1;   // n, uniform spacing T/n

  double dt() const { return horizon / double(steps); }
  double time(std::size_t k) const { return double(k) * dt(); }
  void validate() const;
};

// Implicit Euler knots x_k > 0 plus the piecewise-linear evaluator between
// them.
class EulerPath {
 public:
  EulerPath(TimeGrid grid, std::vector<double> knots);

  const TimeGrid& grid() const { return grid_; }
  const std::vector<double>& knots() const { return knots_; }
  double operator()(double t) const;  // linear interpolation
  double sup() const;

 private:
  TimeGrid grid_;
  std::vector<double> knots_;
};

// Solves x = mu + dt*b(x), the per-step equation of the implicit scheme.
// phi(x) = mu + dt*b(x) - x is strictly decreasing from +inf at 0+ to -inf,
// so the positive root is unique: exponential bracket expansion from the
// hint, bisection to 1e-12 relative width, one Newton polish with bdot.
double implicit_step(const DriftSpec& spec, double mu, double dt, double hint);
double implicit_step(const DriftSpec& spec, double mu, double dt);

// Implicit Euler path of dX = b(X)dt + sigma dB along the given driver values
// (w_{t_0},...,w_{t_n}). Negative sigma is normalized by flipping the driver;
// sigma = 0 runs the deterministic scheme.
EulerPath solve_path(const DriftSpec& spec, double sigma, double x0,
                     const TimeGrid& grid, std::span<const double> driver_values);
EulerPath solve_path(const DriftSpec& spec, double sigma, double x0,
                     const TimeGrid& grid, const FbmPath& driver);

// Langevin implicit Euler, closed form per step:
// Y_{k+1} = (Y_k + sigma (B_{t_{k+1}} - B_{t_k})) / (1 + R T/n).
std::vector<double> solve_langevin_path(double R, double sigma, double y0,
                                        const TimeGrid& grid,
                                        std::span<const double> driver_values);
std::vector<double> solve_langevin_path(double R, double sigma, double y0,
                                        const TimeGrid& grid, const FbmPath& driver);

struct ConvergenceRow {
  std::size_t n = 0;
  double median_sup_error = 0;
  double q25 = 0;
  double q75 = 0;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  double slope = 0;  // log-log least squares on the medians
};

// Self-convergence study: one fine noise realization per replication at
// reference_n, coarse drivers by block-summing its increments, sup-norm error
// of the piecewise-linear paths measured on the fine grid. reference_n must be
// a power-of-two multiple of every entry of n_list.
ConvergenceResult convergence_study(const DriftSpec& spec, double sigma, double x0,
                                    double hurst, double alpha,
                                    const std::vector<std::size_t>& n_list,
                                    std::size_t reference_n, std::size_t reps,
                                    std::uint64_t seed, double horizon = 1.0);

}  // namespace fsde
