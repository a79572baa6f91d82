#pragma once

#include <cstdint>
#include <vector>

#include "fsde/common.hpp"

namespace fsde {

enum class FbmMethod {
  circulant_embedding,  // Davies-Harte FFT synthesis, fails on negative eigenvalues
  cholesky,             // dense factorization of the fGn covariance, exact, O(n^3)
  auto_select,          // circulant embedding with Cholesky fallback
};

struct NoiseConfig {
  double hurst = 0.7;
  double holder_alpha = 0.55;  // working Holder exponent, 0 < alpha < hurst
  double horizon = 1.0;        // T
  std::size_t steps = 1024;    // n
  std::uint64_t seed = 0;
  FbmMethod method = FbmMethod::auto_select;
  bool two_sided = false;
  std::uint64_t stream = stream::noise;
  std::uint64_t replication = 0;

  void validate() const;
};

// Fractional Brownian path sampled on a uniform grid.
// One-sided: t_k = kT/n for k = 0..n, values[0] = 0.
// Two-sided: t_k = -T + kT/n for k = 0..2n, value 0 at the origin index n.
// values are the cumulative sums of the stationary fGn increments, rebased so
// the path vanishes at the time origin.
struct FbmPath {
  double horizon = 0;  // T
  std::size_t steps = 0;  // n
  bool two_sided = false;
  std::vector<double> increments;
  std::vector<double> values;

  double dt() const { return horizon / double(steps); }
  std::size_t origin_index() const { return two_sided ? steps : 0; }
  double time(std::size_t k) const {
    return two_sided ? -horizon + double(k) * dt() : double(k) * dt();
  }
  // linear interpolation between grid values
  double value_at_time(double t) const;
};

// Cov(B_s, B_t) = (s^{2H} + t^{2H} - |t-s|^{2H}) / 2 for s,t >= 0.
double fbm_covariance(double s, double t, double hurst);

// fGn autocovariance gamma(k) = dt^{2H}(|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H})/2
// for lags k = 0..count-1.
std::vector<double> fgn_autocovariance(std::size_t count, double dt, double hurst);

FbmPath sample_fbm(const NoiseConfig& config);

// Path on [-T, T] with value 0 at t = 0; requires config.two_sided.
FbmPath sample_two_sided_fbm(const NoiseConfig& config);

// Wiener shift theta_s: omega |-> omega_{s+.} - omega_s. s must lie on the
// grid; the result is the two-sided path on the largest centered horizon
// T - |s| that stays inside the sampled range. theta_0 is the identity.
FbmPath wiener_shift(const FbmPath& path, double s);

// Gauss hypergeometric 2F1(a, b; c; z) for z <= 0, evaluated through the
// Pfaff transformation to an argument in [0, 1) and the convergent series
// (relative term cutoff 1e-15, hard cap 1e6 terms).
double gauss_2f1(double a, double b, double c, double z);

// Volterra kernel K_H(t,s) = (t-s)^{H-1/2}/Gamma(H+1/2) *
// 2F1(1/2-H, H-1/2; H+1/2; 1-t/s) on {0 < s < t}, zero for s >= t.
// Restricted to H in (1/2, 1); the kernel couples a standard Brownian motion
// B* to an fBm B of the same filtration via B_t = int_0^t K_H(t,s) dB*_s.
double volterra_kernel(double t, double s, double hurst);

struct CoupledPaths {
  std::vector<double> bm_increments;  // iid N(0, T/n)
  FbmPath fbm;
};

// Midpoint discretization of B_t = int_0^t K_H(t,s) dB*_s on a fixed grid.
// Kernel weights K_H(t_k, s_{j+1/2}) are precomputed once so repeated sampling
// is an O(n^2) lower-triangular apply per path.
class VolterraCoupling {
 public:
  VolterraCoupling(std::size_t steps, double horizon, double hurst);

  CoupledPaths sample(std::uint64_t seed, std::uint64_t stream,
                      std::uint64_t replication) const;

  std::size_t steps() const { return n_; }
  double horizon() const { return horizon_; }
  double hurst() const { return hurst_; }
  // weight K_H(t_k, s_{j+1/2}) for j < k
  double weight(std::size_t k, std::size_t j) const;

 private:
  std::size_t n_;
  double horizon_;
  double hurst_;
  std::vector<double> weights_;  // packed rows k = 1..n, row k holds j = 0..k-1
};

// One-shot convenience around VolterraCoupling. H in (1/2, 1).
CoupledPaths coupled_bm_fbm(const NoiseConfig& config);

}  // namespace fsde
