#include "fsde/noise.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

namespace fsde {

namespace {

// FFTW plan creation is not thread-safe; execution is.
std::mutex fftw_mutex;

constexpr std::size_t kCholeskyMaxSteps = 4096;
constexpr std::size_t kMax2f1Terms = 1'000'000;

void fft_inplace(std::vector<std::complex<double>>& data) {
  const auto m = data.size();
  fftw_complex* buf;
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    buf = fftw_alloc_complex(m);
    plan = fftw_plan_dft_1d(int(m), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < m; ++i) {
    buf[i][0] = data[i].real();
    buf[i][1] = data[i].imag();
  }
  fftw_execute(plan);
  for (std::size_t i = 0; i < m; ++i) data[i] = {buf[i][0], buf[i][1]};
  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    fftw_destroy_plan(plan);
    fftw_free(buf);
  }
}

// Davies-Harte: embed gamma(0..n) into a circulant of size 2n, synthesize the
// n-increment fGn block from the eigenvalue square roots.
std::vector<double> fgn_circulant(std::size_t n, double dt, double hurst,
                                  CounterRng& rng) {
  const auto gamma = fgn_autocovariance(n + 1, dt, hurst);
  const std::size_t m = 2 * n;
  std::vector<std::complex<double>> c(m);
  for (std::size_t k = 0; k <= n; ++k) c[k] = gamma[k];
  for (std::size_t k = 1; k < n; ++k) c[m - k] = gamma[k];
  fft_inplace(c);

  std::vector<double> lambda(m);
  double lambda_max = 0;
  for (std::size_t j = 0; j < m; ++j) {
    lambda[j] = c[j].real();
    lambda_max = std::max(lambda_max, lambda[j]);
  }
  for (double lam : lambda) {
    if (lam < -1e-10 * lambda_max)
      throw numerical_error("circulant embedding: negative eigenvalue");
  }

  std::vector<std::complex<double>> a(m);
  a[0] = std::sqrt(std::max(lambda[0], 0.0) / double(m)) * rng.gaussian();
  a[n] = std::sqrt(std::max(lambda[n], 0.0) / double(m)) * rng.gaussian();
  for (std::size_t j = 1; j < n; ++j) {
    const double scale = std::sqrt(std::max(lambda[j], 0.0) / double(2 * m));
    const double re = rng.gaussian();
    const double im = rng.gaussian();
    a[j] = {scale * re, scale * im};
    a[m - j] = std::conj(a[j]);
  }
  fft_inplace(a);

  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k].real();
  return out;
}

// Exact sampling by dense Cholesky of the Toeplitz fGn covariance. Kept as a
// fallback; capped because the packed factor needs n(n+1)/2 doubles.
std::vector<double> fgn_cholesky(std::size_t n, double dt, double hurst,
                                 CounterRng& rng) {
  if (n > kCholeskyMaxSteps)
    throw resource_error("cholesky fGn sampler: n exceeds memory cap " +
                         std::to_string(kCholeskyMaxSteps));
  const auto gamma = fgn_autocovariance(n, dt, hurst);
  std::vector<double> L(n * (n + 1) / 2);
  auto at = [&L](std::size_t i, std::size_t j) -> double& {
    return L[i * (i + 1) / 2 + j];
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = gamma[i - j];
      for (std::size_t k = 0; k < j; ++k) s -= at(i, k) * at(j, k);
      if (i == j) {
        if (s <= 0) throw numerical_error("cholesky fGn sampler: covariance not PD");
        at(i, i) = std::sqrt(s);
      } else {
        at(i, j) = s / at(j, j);
      }
    }
  }
  std::vector<double> z(n), out(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = rng.gaussian();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (std::size_t j = 0; j <= i; ++j) s += at(i, j) * z[j];
    out[i] = s;
  }
  return out;
}

std::vector<double> sample_fgn(std::size_t n, double dt, double hurst,
                               FbmMethod method, CounterRng& rng) {
  switch (method) {
    case FbmMethod::circulant_embedding:
      return fgn_circulant(n, dt, hurst, rng);
    case FbmMethod::cholesky:
      return fgn_cholesky(n, dt, hurst, rng);
    case FbmMethod::auto_select:
      try {
        return fgn_circulant(n, dt, hurst, rng);
      } catch (const numerical_error&) {
        return fgn_cholesky(n, dt, hurst, rng);
      }
  }
  throw std::invalid_argument("sample_fgn: unknown method");
}

}  // namespace

void NoiseConfig::validate() const {
  if (!(hurst > 0 && hurst < 1))
    throw std::invalid_argument("NoiseConfig: hurst outside (0,1)");
  if (!(holder_alpha > 0 && holder_alpha < hurst))
    throw std::invalid_argument("NoiseConfig: need 0 < alpha < hurst");
  if (!(horizon > 0)) throw std::invalid_argument("NoiseConfig: horizon <= 0");
  if (steps < 2) throw std::invalid_argument("NoiseConfig: n >= 2 required");
}

double FbmPath::value_at_time(double t) const {
  const double t0 = two_sided ? -horizon : 0.0;
  const double pos = (t - t0) / dt();
  if (pos < 0 || pos > double(values.size() - 1))
    throw std::invalid_argument("FbmPath: time outside sampled range");
  std::size_t k = std::min(std::size_t(pos), values.size() - 2);
  const double frac = pos - double(k);
  return values[k] * (1.0 - frac) + values[k + 1] * frac;
}

double fbm_covariance(double s, double t, double hurst) {
  if (!(hurst > 0 && hurst < 1))
    throw std::invalid_argument("fbm_covariance: hurst outside (0,1)");
  if (s < 0 || t < 0) throw std::domain_error("fbm_covariance: negative time");
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(s, h2) + std::pow(t, h2) - std::pow(std::abs(t - s), h2));
}

std::vector<double> fgn_autocovariance(std::size_t count, double dt, double hurst) {
  if (!(hurst > 0 && hurst < 1))
    throw std::invalid_argument("fgn_autocovariance: hurst outside (0,1)");
  const double h2 = 2.0 * hurst;
  const double scale = 0.5 * std::pow(dt, h2);
  std::vector<double> gamma(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double kd = double(k);
    gamma[k] = scale * (std::pow(kd + 1.0, h2) - 2.0 * std::pow(kd, h2) +
                        std::pow(std::abs(kd - 1.0), h2));
  }
  return gamma;
}

FbmPath sample_fbm(const NoiseConfig& config) {
  config.validate();
  if (config.two_sided) return sample_two_sided_fbm(config);
  CounterRng rng(config.seed, config.stream, config.replication);
  FbmPath path;
  path.horizon = config.horizon;
  path.steps = config.steps;
  path.two_sided = false;
  path.increments =
      sample_fgn(config.steps, path.dt(), config.hurst, config.method, rng);
  path.values.resize(config.steps + 1);
  path.values[0] = 0.0;
  for (std::size_t k = 0; k < config.steps; ++k)
    path.values[k + 1] = path.values[k] + path.increments[k];
  return path;
}

FbmPath sample_two_sided_fbm(const NoiseConfig& config) {
  config.validate();
  if (!config.two_sided)
    throw std::invalid_argument("sample_two_sided_fbm: config.two_sided is false");
  CounterRng rng(config.seed, config.stream, config.replication);
  FbmPath path;
  path.horizon = config.horizon;
  path.steps = config.steps;
  path.two_sided = true;
  // increments over [-T, T] form one stationary fGn block of length 2n
  path.increments =
      sample_fgn(2 * config.steps, path.dt(), config.hurst, config.method, rng);
  path.values.resize(2 * config.steps + 1);
  path.values[0] = 0.0;
  for (std::size_t k = 0; k < 2 * config.steps; ++k)
    path.values[k + 1] = path.values[k] + path.increments[k];
  const double at_origin = path.values[config.steps];
  for (double& v : path.values) v -= at_origin;
  return path;
}

FbmPath wiener_shift(const FbmPath& path, double s) {
  if (!path.two_sided)
    throw std::invalid_argument("wiener_shift: two-sided path required");
  const double steps_real = s / path.dt();
  const auto shift = std::llround(steps_real);
  if (std::abs(steps_real - double(shift)) > 1e-9)
    throw std::invalid_argument("wiener_shift: s must lie on the grid");
  const auto mag = std::size_t(std::abs(shift));
  if (mag > path.steps)
    throw std::invalid_argument("wiener_shift: |s| exceeds the horizon");

  FbmPath out;
  out.steps = path.steps - mag;
  out.horizon = double(out.steps) * path.dt();
  out.two_sided = true;
  const std::size_t count = 2 * out.steps + 1;
  // index k of the output corresponds to t_k + s on the input grid
  const std::size_t base = (shift >= 0) ? 2 * mag : 0;
  const double at_s = path.values[std::size_t(std::int64_t(path.origin_index()) + shift)];
  out.values.resize(count);
  for (std::size_t k = 0; k < count; ++k) out.values[k] = path.values[base + k] - at_s;
  out.increments.resize(count - 1);
  for (std::size_t k = 0; k + 1 < count; ++k)
    out.increments[k] = out.values[k + 1] - out.values[k];
  return out;
}

double gauss_2f1(double a, double b, double c, double z) {
  if (z > 0) throw std::domain_error("gauss_2f1: implemented for z <= 0 only");
  if (c <= 0 && c == std::floor(c))
    throw std::invalid_argument("gauss_2f1: c is a nonpositive integer");
  if (z == 0) return 1.0;
  // Pfaff: 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)), argument in [0,1)
  const double w = z / (z - 1.0);
  const double b2 = c - b;
  double term = 1.0;
  double sum = 1.0;
  for (std::size_t k = 0; k < kMax2f1Terms; ++k) {
    const double kd = double(k);
    term *= (a + kd) * (b2 + kd) / ((c + kd) * (kd + 1.0)) * w;
    sum += term;
    if (std::abs(term) <= 1e-15 * std::abs(sum))
      return std::pow(1.0 - z, -a) * sum;
  }
  throw numerical_error("gauss_2f1: series did not converge");
}

double volterra_kernel(double t, double s, double hurst) {
  if (!(hurst > 0.5 && hurst < 1))
    throw std::invalid_argument("volterra_kernel: H in (1/2,1) required");
  if (!(t > 0)) throw std::domain_error("volterra_kernel: t must be positive");
  if (s < 0) throw std::domain_error("volterra_kernel: s must be nonnegative");
  if (s == 0) throw std::domain_error("volterra_kernel: s = 0 (1 - t/s undefined)");
  if (s >= t) return 0.0;
  return std::pow(t - s, hurst - 0.5) / std::tgamma(hurst + 0.5) *
         gauss_2f1(0.5 - hurst, hurst - 0.5, hurst + 0.5, 1.0 - t / s);
}

VolterraCoupling::VolterraCoupling(std::size_t steps, double horizon, double hurst)
    : n_(steps), horizon_(horizon), hurst_(hurst) {
  if (!(hurst > 0.5 && hurst < 1))
    throw std::invalid_argument("VolterraCoupling: H in (1/2,1) required");
  if (steps < 2 || !(horizon > 0))
    throw std::invalid_argument("VolterraCoupling: bad grid");
  const double dt = horizon_ / double(n_);
  weights_.resize(n_ * (n_ + 1) / 2);
  std::size_t idx = 0;
  for (std::size_t k = 1; k <= n_; ++k) {
    const double tk = double(k) * dt;
    for (std::size_t j = 0; j < k; ++j)
      weights_[idx++] = volterra_kernel(tk, (double(j) + 0.5) * dt, hurst_);
  }
}

double VolterraCoupling::weight(std::size_t k, std::size_t j) const {
  if (k < 1 || k > n_ || j >= k)
    throw std::invalid_argument("VolterraCoupling::weight: indices out of range");
  return weights_[(k - 1) * k / 2 + j];
}

CoupledPaths VolterraCoupling::sample(std::uint64_t seed, std::uint64_t stream,
                                      std::uint64_t replication) const {
  CounterRng rng(seed, stream, replication);
  const double dt = horizon_ / double(n_);
  const double sdt = std::sqrt(dt);
  CoupledPaths out;
  out.bm_increments.resize(n_);
  for (double& dv : out.bm_increments) dv = sdt * rng.gaussian();

  out.fbm.horizon = horizon_;
  out.fbm.steps = n_;
  out.fbm.two_sided = false;
  out.fbm.values.assign(n_ + 1, 0.0);
  std::size_t idx = 0;
  for (std::size_t k = 1; k <= n_; ++k) {
    double acc = 0;
    for (std::size_t j = 0; j < k; ++j) acc += weights_[idx++] * out.bm_increments[j];
    out.fbm.values[k] = acc;
  }
  out.fbm.increments.resize(n_);
  for (std::size_t k = 0; k < n_; ++k)
    out.fbm.increments[k] = out.fbm.values[k + 1] - out.fbm.values[k];
  return out;
}

CoupledPaths coupled_bm_fbm(const NoiseConfig& config) {
  config.validate();
  VolterraCoupling coupling(config.steps, config.horizon, config.hurst);
  return coupling.sample(config.seed, config.stream, config.replication);
}

}  // namespace fsde
