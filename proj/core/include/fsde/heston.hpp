#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fsde/noise.hpp"
#include "fsde/scheme.hpp"

namespace fsde {

// Time-dependent coefficient: a constant or a piecewise-linear table.
class RateFn {
 public:
  static RateFn constant(double value);
  static RateFn table(std::vector<double> times, std::vector<double> values);

  double operator()(double t) const;
  bool is_constant() const { return times_.empty(); }
  double constant_value() const { return value_; }

 private:
  RateFn() = default;
  double value_ = 0;
  std::vector<double> times_, values_;
};

// Fractional Heston model:
//   dS = mu_t S dt + sqrt(Z) S dB*,   dZ = (v - w Z)dt + zeta Z^beta dB,
// with B = int K_H(.,s) dB* the coupled fBm and beta = 1 - 1/(gamma+1),
// required to lie in (1-H, 1).
struct HestonConfig {
  double spot = 1.0;  // S_0
  double z0 = 0.04;
  double v = 0.04;    // mean-reversion level data: dZ drift is v - w Z
  double w = 1.0;
  double zeta = 0.2;  // vol-of-vol; zeta = 0 degenerates to deterministic Z
  double gamma = 2.0;
  double hurst = 0.7;
  RateFn mu = RateFn::constant(0.0);
  RateFn rate = RateFn::constant(0.0);
  TimeGrid grid{1.0, 256};
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;

  double beta() const { return 1.0 - 1.0 / (gamma + 1.0); }
  void validate() const;
};

// Volatility path Z_k = X_k^{gamma+1} through the additive solver with
// x0 = z0^{1-beta}, sigma = zeta(1-beta). Strictly positive.
std::vector<double> simulate_vol(const HestonConfig& config);
std::vector<double> simulate_vol(const HestonConfig& config, const FbmPath& driver);

// Price path S_k = S_0 exp(int (mu - Z/2) ds + sum sqrt(Z_j) dB*_j), drift by
// trapezoid, Ito sum with left endpoints.
std::vector<double> simulate_price(const HestonConfig& config, std::span<const double> z,
                                   std::span<const double> bm_increments);

// Actualized prices S~_k = S_k / (s0_0 exp(int_0^{t_k} r du)), trapezoid rate
// integral.
std::vector<double> discount(std::span<const double> s, const RateFn& rate,
                             const TimeGrid& grid, double s0_0 = 1.0);

struct HestonPath {
  TimeGrid grid;
  std::vector<double> z;
  std::vector<double> s;
  std::vector<double> s_discounted;
};

// One replication: coupled (B*, B) noise, volatility, price, discounting.
HestonPath simulate_heston(const HestonConfig& config);

// Batch runner reusing the O(n^2) Volterra kernel weights across paths.
class HestonRunner {
 public:
  explicit HestonRunner(HestonConfig config);
  HestonPath run(std::uint64_t replication) const;
  const HestonConfig& config() const { return config_; }

 private:
  HestonConfig config_;
  VolterraCoupling coupling_;
};

}  // namespace fsde
