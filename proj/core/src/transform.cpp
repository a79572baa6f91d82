#include "fsde/transform.hpp"

#include <cmath>

namespace fsde {

std::vector<double> theta_continuous(const std::function<double(double)>& b_r,
                                     double R, const EulerPath& X, double y0) {
  if (!(R > 0)) throw std::invalid_argument("theta_continuous: R <= 0");
  const auto& x = X.knots();
  const std::size_t n = X.grid().steps;
  const double dt = X.grid().dt();
  const double decay = std::exp(-R * dt);
  const double x0 = x[0];

  std::vector<double> y(n + 1);
  y[0] = y0;
  double conv = 0;  // trapezoid of int_0^{t_k} e^{-R(t_k - s)} b_R(x_s) ds
  double f_prev = b_r(x[0]);
  for (std::size_t k = 1; k <= n; ++k) {
    const double f = b_r(x[k]);
    conv = decay * conv + 0.5 * dt * (decay * f_prev + f);
    f_prev = f;
    y[k] = x[k] - (x0 - y0) * std::exp(-R * X.grid().time(k)) - conv;
  }
  return y;
}

std::vector<double> theta_continuous(const DriftSpec& spec, const EulerPath& X,
                                     double y0) {
  const double R = spec.growth_R();
  return theta_continuous([&spec, R](double x) { return spec.b(x) + R * x; }, R, X, y0);
}

std::vector<double> theta_discrete(const std::function<double(double)>& b_r, double R,
                                   std::span<const double> x_knots, double horizon,
                                   std::size_t steps) {
  if (!(R > 0)) throw std::invalid_argument("theta_discrete: R <= 0");
  if (x_knots.size() != steps + 1)
    throw std::invalid_argument("theta_discrete: knot count != steps + 1");
  if (!(horizon > 0)) throw std::invalid_argument("theta_discrete: horizon <= 0");
  const double dt = horizon / double(steps);
  const double denom = 1.0 + R * dt;

  std::vector<double> y(steps + 1);
  y[0] = x_knots[0];
  double s = 0;  // sum_{i=1}^k (1 + RT/n)^{i-1-k} b_R(x_i)
  for (std::size_t k = 1; k <= steps; ++k) {
    s = (s + b_r(x_knots[k])) / denom;
    y[k] = x_knots[k] - dt * s;
  }
  return y;
}

std::vector<double> theta_discrete(const DriftSpec& spec, std::span<const double> x_knots,
                                   double horizon, std::size_t steps) {
  const double R = spec.growth_R();
  return theta_discrete([&spec, R](double x) { return spec.b(x) + R * x; }, R, x_knots,
                        horizon, steps);
}

std::vector<double> lamperti_forward(double kappa, std::span<const double> x_knots) {
  if (kappa == 0) throw std::invalid_argument("lamperti_forward: kappa = 0");
  std::vector<double> z(x_knots.size());
  for (std::size_t i = 0; i < x_knots.size(); ++i) {
    if (!(x_knots[i] > 0))
      throw std::domain_error("lamperti_forward: nonpositive state");
    z[i] = std::pow(x_knots[i], kappa);
  }
  return z;
}

std::vector<double> lamperti_backward(double kappa, std::span<const double> z_values) {
  if (kappa == 0) throw std::invalid_argument("lamperti_backward: kappa = 0");
  std::vector<double> x(z_values.size());
  for (std::size_t i = 0; i < z_values.size(); ++i) {
    if (!(z_values[i] > 0))
      throw std::domain_error("lamperti_backward: nonpositive state");
    x[i] = std::pow(z_values[i], 1.0 / kappa);
  }
  return x;
}

CirModel build_cir_model(double z0, double v, double w, double zeta, double gamma,
                         double alpha) {
  if (!(z0 > 0 && v > 0 && w > 0 && gamma > 0))
    throw std::invalid_argument("build_cir_model: z0, v, w, gamma must be positive");
  if (zeta == 0) throw std::invalid_argument("build_cir_model: zeta = 0");
  const double beta = 1.0 - 1.0 / (gamma + 1.0);
  DriftParams params;
  params.u = 1.0 - beta;
  params.v = v;
  params.w = w;
  params.gamma = gamma;
  // admissibility of the b1 family at alpha is exactly beta in (1-alpha, 1)
  DriftSpec drift = make_admissible_drift(DriftFamily::b1, params, alpha);
  return CirModel{std::move(drift), zeta * (1.0 - beta), std::pow(z0, 1.0 - beta),
                  beta, gamma + 1.0};
}

}  // namespace fsde
