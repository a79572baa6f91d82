#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fsde/drift.hpp"
#include "fsde/scheme.hpp"

namespace fsde {

enum class TransformKind { theta_continuous, theta_discrete, lamperti };

struct TransformReport {
  TransformKind kind = TransformKind::theta_discrete;
  std::vector<double> output;  // same length as the input series
  double R = 0;
  double y0 = 0;
  double kappa = 0;
};

// Continuous drift-removing map onto the fractional Ornstein-Uhlenbeck world,
// evaluated on the solver grid with a trapezoid convolution:
// Y_t = X_t - (x0 - y0) e^{-Rt} - int_0^t e^{-R(t-s)} b_R(X_s) ds,
// b_R(x) = b(x) + R x, R the certified growth constant of the drift.
std::vector<double> theta_continuous(const DriftSpec& spec, const EulerPath& X,
                                     double y0);
std::vector<double> theta_continuous(const std::function<double(double)>& b_r,
                                     double R, const EulerPath& X, double y0);

// Discrete transform: Y_0 = X_0 and for k >= 1
// Y_k = X_k - (T/n) sum_{i=1}^k (1 + RT/n)^{i-1-k} b_R(X_i).
// On identical noise this reproduces the Langevin implicit scheme exactly
// (up to roundoff); that identity is the module's flagship test.
std::vector<double> theta_discrete(const DriftSpec& spec, std::span<const double> x_knots,
                                   double horizon, std::size_t steps);
std::vector<double> theta_discrete(const std::function<double(double)>& b_r, double R,
                                   std::span<const double> x_knots, double horizon,
                                   std::size_t steps);

// Power change of variable F_kappa(x) = x^kappa (Lamperti map).
// kappa = gamma + 1 sends the additive equation to the generalized CIR state,
// kappa = -(gamma + 1) to the generalized Verhulst state.
std::vector<double> lamperti_forward(double kappa, std::span<const double> x_knots);
std::vector<double> lamperti_backward(double kappa, std::span<const double> z_values);

struct CirModel {
  DriftSpec drift;   // b(x) = (1-beta)(v x^{-gamma} - w x), a b1 family
  double sigma = 0;  // zeta (1-beta), signed; the solver normalizes the sign
  double x0 = 0;     // z0^{1-beta}
  double beta = 0;   // 1 - 1/(gamma+1)
  double kappa = 0;  // gamma + 1, the Lamperti exponent mapping X back to Z
};

// Additive-equation data whose Lamperti image solves the generalized CIR
// equation dZ = (v - w Z)dt + zeta Z^beta dB. Requires admissibility at the
// working alpha (equivalently beta in (1-alpha, 1)).
CirModel build_cir_model(double z0, double v, double w, double zeta, double gamma,
                         double alpha);

}  // namespace fsde
