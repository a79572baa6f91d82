#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace fsde {

// Thrown when an iterative method fails (root bracketing, non-convergent
// series, negative circulant eigenvalues, degenerate estimator input).
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a request would exceed a hard size cap (e.g. dense Cholesky
// factorization of a covariance too large to hold in memory).
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Counter-based RNG: a splitmix64 output function applied to key + counter.
// The key mixes (seed, stream, replication), so every Monte Carlo replication
// owns an independent, order-free sequence: draws depend only on the key and
// the draw index, never on which thread produced them.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0,
                      std::uint64_t replication = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~std::uint64_t{0}; }

  result_type operator()();

  double uniform();   // (0, 1]
  double gaussian();  // N(0,1) via Box-Muller, second value cached

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double cached_ = 0;
  bool has_cached_ = false;
};

// Fixed stream ids, one per consumer, so distinct experiments sharing a master
// seed never collide on draws.
namespace stream {
inline constexpr std::uint64_t noise = 1;
inline constexpr std::uint64_t convergence = 2;
inline constexpr std::uint64_t pullback = 3;
inline constexpr std::uint64_t hitting = 4;
inline constexpr std::uint64_t estimate = 5;
inline constexpr std::uint64_t density_main = 6;
inline constexpr std::uint64_t density_mehler = 7;
inline constexpr std::uint64_t density_hist = 8;
inline constexpr std::uint64_t heston = 9;
inline constexpr std::uint64_t ergodic = 10;
}  // namespace stream

// Runs body(0..count-1) across hardware threads. Results must be written to
// per-index slots; the schedule is unspecified. First exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

double mean(std::span<const double> xs);
double median(std::vector<double> xs);
double quantile(std::vector<double> xs, double p);

struct LineFit {
  double slope = 0;
  double intercept = 0;
};

// Ordinary least squares y ~ slope*x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace fsde
