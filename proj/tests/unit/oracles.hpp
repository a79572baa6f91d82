// Independent test oracles. Everything here deliberately avoids the library's
// own evaluation paths: raw series instead of the Pfaff transform, an Euler
// integral instead of the kernel formula, plain bisection instead of the
// production root solver, finite differences instead of the solved linear
// equation.
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracles {

// Raw hypergeometric series sum_k (a)_k (b)_k / (c)_k z^k / k!; converges for
// |z| < 1 only, which is all the comparison needs.
inline double hyp2f1_raw_series(double a, double b, double c, double z) {
  double term = 1.0, sum = 1.0;
  for (std::size_t k = 0; k < 200000; ++k) {
    const double kd = double(k);
    term *= (a + kd) * (b + kd) / ((c + kd) * (kd + 1.0)) * z;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) return sum;
  }
  throw std::runtime_error("hyp2f1_raw_series: no convergence");
}

// Euler integral 2F1(a,b;c;z) = Gamma(c)/(Gamma(b)Gamma(c-b))
//   int_0^1 x^{b-1} (1-x)^{c-b-1} (1-zx)^{-a} dx  (c > b > 0),
// with the substitution x = y^{1/b} so the integrand is smooth at 0, then
// composite Simpson. Used for the Volterra kernel where c - b = 1.
inline double hyp2f1_euler_integral(double a, double b, double c, double z) {
  if (!(c > b && b > 0)) throw std::runtime_error("euler integral: need c > b > 0");
  const double cb = c - b;
  auto f = [&](double y) {
    const double x = std::pow(y, 1.0 / b);
    return std::pow(1.0 - x, cb - 1.0) * std::pow(1.0 - z * x, -a) / b;
  };
  const std::size_t m = 20000;  // Simpson panels (even count)
  const double h = 1.0 / double(m);
  double sum = f(1e-300) + f(1.0 - 1e-12);
  for (std::size_t i = 1; i < m; ++i) sum += f(double(i) * h) * (i % 2 ? 4.0 : 2.0);
  const double integral = sum * h / 3.0;
  return std::tgamma(c) / (std::tgamma(b) * std::tgamma(cb)) * integral;
}

// Plain bisection for a strictly decreasing function with a sign change.
inline double bisect_decreasing(const std::function<double(double)>& f, double lo,
                                double hi, int iterations = 200) {
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Positive root of the gamma = 1 implicit step: (1 + dt*u*w) x^2 - mu x
// - dt*u*v = 0 by the quadratic formula.
inline double quadratic_step_root(double u, double v, double w, double mu, double dt) {
  const double a = 1.0 + dt * u * w;
  const double disc = mu * mu + 4.0 * a * dt * u * v;
  return (mu + std::sqrt(disc)) / (2.0 * a);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace oracles
