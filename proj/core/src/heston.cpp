#include "fsde/heston.hpp"

#include <algorithm>
#include <cmath>

#include "fsde/transform.hpp"

namespace fsde {

RateFn RateFn::constant(double value) {
  RateFn fn;
  fn.value_ = value;
  return fn;
}

RateFn RateFn::table(std::vector<double> times, std::vector<double> values) {
  if (times.size() != values.size() || times.size() < 2)
    throw std::invalid_argument("RateFn::table: need two or more (t, value) pairs");
  if (!std::is_sorted(times.begin(), times.end()))
    throw std::invalid_argument("RateFn::table: times must be ascending");
  RateFn fn;
  fn.times_ = std::move(times);
  fn.values_ = std::move(values);
  return fn;
}

double RateFn::operator()(double t) const {
  if (times_.empty()) return value_;
  if (t <= times_.front()) return values_.front();
  if (t >= times_.back()) return values_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t k = std::size_t(it - times_.begin());
  const double frac = (t - times_[k - 1]) / (times_[k] - times_[k - 1]);
  return values_[k - 1] * (1.0 - frac) + values_[k] * frac;
}

void HestonConfig::validate() const {
  grid.validate();
  if (!(spot > 0)) throw std::invalid_argument("HestonConfig: spot <= 0");
  if (!(z0 > 0)) throw std::invalid_argument("HestonConfig: z0 <= 0");
  if (!(v > 0 && w > 0)) throw std::invalid_argument("HestonConfig: v, w must be positive");
  if (!(gamma > 0)) throw std::invalid_argument("HestonConfig: gamma <= 0");
  if (!(hurst > 0.5 && hurst < 1))
    throw std::invalid_argument("HestonConfig: hurst in (1/2,1) required");
  if (!(beta() > 1.0 - hurst && beta() < 1.0))
    throw std::invalid_argument("HestonConfig: beta outside (1-H, 1)");
}

namespace {

// working Holder exponent for the additive solve: midpoint of the window
// (1/(gamma+1), H) that the beta constraint guarantees nonempty
double working_alpha(const HestonConfig& config) {
  return 0.5 * (1.0 / (config.gamma + 1.0) + config.hurst);
}

DriftSpec cir_drift(const HestonConfig& config) {
  DriftParams params;
  params.u = 1.0 - config.beta();
  params.v = config.v;
  params.w = config.w;
  params.gamma = config.gamma;
  return make_admissible_drift(DriftFamily::b1, params, working_alpha(config));
}

}  // namespace

std::vector<double> simulate_vol(const HestonConfig& config, const FbmPath& driver) {
  config.validate();
  const DriftSpec drift = cir_drift(config);
  const double one_minus_beta = 1.0 - config.beta();
  const double x0 = std::pow(config.z0, one_minus_beta);
  const double sigma = config.zeta * one_minus_beta;
  EulerPath x = solve_path(drift, sigma, x0, config.grid, driver);
  return lamperti_forward(config.gamma + 1.0, x.knots());
}

std::vector<double> simulate_vol(const HestonConfig& config) {
  config.validate();
  if (config.zeta == 0) {
    // deterministic volatility: solve with a zero driver
    std::vector<double> flat(config.grid.steps + 1, 0.0);
    FbmPath zero;
    zero.horizon = config.grid.horizon;
    zero.steps = config.grid.steps;
    zero.values = flat;
    zero.increments.assign(config.grid.steps, 0.0);
    return simulate_vol(config, zero);
  }
  NoiseConfig noise;
  noise.hurst = config.hurst;
  noise.holder_alpha = working_alpha(config);
  noise.horizon = config.grid.horizon;
  noise.steps = config.grid.steps;
  noise.seed = config.seed;
  noise.stream = stream::heston;
  noise.replication = config.replication;
  return simulate_vol(config, coupled_bm_fbm(noise).fbm);
}

std::vector<double> simulate_price(const HestonConfig& config, std::span<const double> z,
                                   std::span<const double> bm_increments) {
  config.validate();
  const std::size_t n = config.grid.steps;
  if (z.size() != n + 1 || bm_increments.size() != n)
    throw std::invalid_argument("simulate_price: inputs not sampled on the grid");
  const double dt = config.grid.dt();

  std::vector<double> s(n + 1);
  s[0] = config.spot;
  double drift_acc = 0;  // trapezoid of mu_t - Z_t/2
  double ito_acc = 0;    // left-point sum of sqrt(Z) dB*
  double f_prev = config.mu(0.0) - 0.5 * z[0];
  for (std::size_t k = 0; k < n; ++k) {
    const double f_next = config.mu(config.grid.time(k + 1)) - 0.5 * z[k + 1];
    drift_acc += 0.5 * dt * (f_prev + f_next);
    if (!(z[k] >= 0)) throw std::domain_error("simulate_price: negative variance");
    ito_acc += std::sqrt(z[k]) * bm_increments[k];
    f_prev = f_next;
    s[k + 1] = config.spot * std::exp(drift_acc + ito_acc);
  }
  return s;
}

std::vector<double> discount(std::span<const double> s, const RateFn& rate,
                             const TimeGrid& grid, double s0_0) {
  if (s.size() != grid.steps + 1)
    throw std::invalid_argument("discount: series not sampled on the grid");
  if (!(s0_0 > 0)) throw std::invalid_argument("discount: s0_0 <= 0");
  const double dt = grid.dt();
  std::vector<double> out(s.size());
  double acc = 0;
  double r_prev = rate(0.0);
  out[0] = s[0] / s0_0;
  for (std::size_t k = 0; k < grid.steps; ++k) {
    const double r_next = rate(grid.time(k + 1));
    acc += 0.5 * dt * (r_prev + r_next);
    r_prev = r_next;
    out[k + 1] = s[k + 1] / (s0_0 * std::exp(acc));
  }
  return out;
}

HestonPath simulate_heston(const HestonConfig& config) {
  HestonRunner runner(config);
  return runner.run(config.replication);
}

HestonRunner::HestonRunner(HestonConfig config)
    : config_(std::move(config)),
      coupling_(config_.grid.steps, config_.grid.horizon, config_.hurst) {
  config_.validate();
}

HestonPath HestonRunner::run(std::uint64_t replication) const {
  HestonPath path;
  path.grid = config_.grid;
  const CoupledPaths noise =
      coupling_.sample(config_.seed, stream::heston, replication);
  if (config_.zeta == 0) {
    path.z = simulate_vol(config_);
  } else {
    path.z = simulate_vol(config_, noise.fbm);
  }
  path.s = simulate_price(config_, path.z, noise.bm_increments);
  path.s_discounted = discount(path.s, config_.rate, config_.grid);
  return path;
}

}  // namespace fsde
