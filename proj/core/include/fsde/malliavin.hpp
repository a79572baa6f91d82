#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fsde/drift.hpp"
#include "fsde/scheme.hpp"

namespace fsde {

struct DerivativePath {
  TimeGrid grid;
  std::vector<double> values;  // D_t at the knots
  double xi = 0;               // initial-condition component of the direction
};

// First-order directional derivative of the Ito map at (x0, w) in the
// direction (xi, h): solves the linear integral equation
//   D_t = xi + int_0^t bdot(X_s) D_s ds + sigma h_t
// by exponential integrating-factor stepping, with the per-cell exponent the
// trapezoid of bdot at the knots and the forcing weighted by phi1(A) =
// (e^A - 1)/A. For h = 0 the steps telescope to D_t = xi exp(int_0^t bdot).
DerivativePath directional_derivative(const DriftSpec& spec, const EulerPath& X,
                                      double sigma, double xi,
                                      std::span<const double> h);

// Malliavin derivative row: D_s X_t = sigma 1_{[0,t]}(s) exp(int_s^t bdot(X_u) du),
// the integral by trapezoid on the solver grid (interpolated off-knot).
// Always within (0, sigma] for s <= t.
double malliavin_derivative(const DriftSpec& spec, const EulerPath& X, double sigma,
                            double s, double t);

// Inner product of step functions (cell values on a uniform grid) in the
// reproducing-kernel space of fBm with H in (1/2, 1). The weight
// H(2H-1)|s-r|^{2H-2} integrates in closed form over every cell pair; the
// resulting cell weights are exactly the fGn autocovariances, so
// <1_{[0,s]}, 1_{[0,t]}> reproduces the fBm covariance.
double rkhs_inner_product(std::span<const double> phi, std::span<const double> psi,
                          double dt, double hurst);

struct NvOptions {
  std::size_t paths = 6000;        // outer Monte Carlo samples
  std::size_t mehler_nodes = 4;    // fresh paths per sample for the T_u average
  std::size_t bins = 32;           // equal-mass bins for the conditional mean g
  std::size_t steps = 256;         // solver grid
  std::size_t quad_nodes = 16;     // Gauss-Legendre nodes on [0, u_max]
  double u_max = 8.0;
  double hurst = 0.7;
  double holder_alpha = 0.55;
};

struct NvDensity {
  std::vector<double> x;        // copy of the evaluation grid
  std::vector<double> density;  // estimated density values, nonnegative
  std::vector<std::string> warnings;
};

// Nourdin-Viens density of X_t(x0):
//   f(x) = E|X_t - m| / (2 g(x)) exp(-int_m^x (y - m)/g(y) dy),  m = E X_t,
//   g(x) = E[ <D X_t, -D L^{-1} X_t>_H | X_t = x ].
// -D L^{-1} X_t is computed through Mehler's formula: an expectation over
// mixed drivers e^{-u} w + sqrt(1 - e^{-2u}) w' integrated against e^{-u} du,
// the u-integral by Gauss-Legendre on [0, u_max] with the weight absorbed,
// the expectation by mehler_nodes fresh paths. g is a binned conditional
// mean over the X_t samples; the outer x-integral is a trapezoid on x_grid.
NvDensity nv_density_estimate(const DriftSpec& spec, double sigma, double x0,
                              double t, std::span<const double> x_grid,
                              const NvOptions& options, std::uint64_t seed);

struct Histogram {
  std::vector<double> edges;    // bins + 1 ascending edges
  std::vector<double> density;  // normalized: sums to 1 against the bin widths

  double value_at(double x) const;  // 0 outside the range
};

// Normalized histogram oracle; needs at least 100 samples.
Histogram empirical_density(std::span<const double> samples, std::size_t bins);

}  // namespace fsde
