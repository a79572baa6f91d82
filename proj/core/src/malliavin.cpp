#include "fsde/malliavin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fsde/noise.hpp"

namespace fsde {

namespace {

double phi1(double a) {  // (e^a - 1)/a, smooth at 0
  return (std::abs(a) < 1e-12) ? 1.0 + 0.5 * a : std::expm1(a) / a;
}

// cumulative trapezoid of bdot(X) along the knots; G[k] = int_0^{t_k} bdot(X_u) du
std::vector<double> bdot_cumulative(const DriftSpec& spec, std::span<const double> knots,
                                    double dt) {
  std::vector<double> g(knots.size());
  g[0] = 0;
  double prev = spec.b_dot(knots[0]);
  for (std::size_t k = 1; k < knots.size(); ++k) {
    const double cur = spec.b_dot(knots[k]);
    g[k] = g[k - 1] + 0.5 * dt * (prev + cur);
    prev = cur;
  }
  return g;
}

struct GaussLegendre {
  std::vector<double> nodes;    // on [0, b]
  std::vector<double> weights;  // plain GL weights scaled to [0, b]
};

// Nodes of P_m by Newton iteration, mapped from [-1,1] to [0, b].
GaussLegendre gauss_legendre(std::size_t m, double b) {
  GaussLegendre out;
  out.nodes.resize(m);
  out.weights.resize(m);
  for (std::size_t i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (double(i) + 0.75) / (double(m) + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * double(k) - 1.0) * x * p1 - (double(k) - 1.0) * p0) /
                          double(k);
        p0 = p1;
        p1 = p2;
      }
      dp = double(m) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    out.nodes[i] = 0.5 * b * (1.0 - x);  // descending roots -> ascending nodes
    out.weights[i] = 0.5 * b * w;
    out.nodes[m - 1 - i] = 0.5 * b * (1.0 + x);
    out.weights[m - 1 - i] = 0.5 * b * w;
  }
  return out;
}

}  // namespace

DerivativePath directional_derivative(const DriftSpec& spec, const EulerPath& X,
                                      double sigma, double xi,
                                      std::span<const double> h) {
  const auto& knots = X.knots();
  if (h.size() != knots.size())
    throw std::invalid_argument("directional_derivative: h not sampled on the grid");
  const double dt = X.grid().dt();

  DerivativePath out;
  out.grid = X.grid();
  out.xi = xi;
  out.values.resize(knots.size());
  out.values[0] = xi + sigma * h[0];
  double a_prev = spec.b_dot(knots[0]);
  for (std::size_t k = 1; k < knots.size(); ++k) {
    const double a_cur = spec.b_dot(knots[k]);
    const double cell = 0.5 * dt * (a_prev + a_cur);
    out.values[k] = std::exp(cell) * out.values[k - 1] +
                    sigma * (h[k] - h[k - 1]) * phi1(cell);
    a_prev = a_cur;
  }
  return out;
}

double malliavin_derivative(const DriftSpec& spec, const EulerPath& X, double sigma,
                            double s, double t) {
  const double T = X.grid().horizon;
  if (s < 0 || t < 0 || s > T * (1 + 1e-12) || t > T * (1 + 1e-12))
    throw std::invalid_argument("malliavin_derivative: times outside [0, T]");
  if (s > t) return 0.0;
  const auto g = bdot_cumulative(spec, X.knots(), X.grid().dt());
  auto interp = [&](double u) {
    const double pos = u / X.grid().dt();
    const std::size_t k = std::min(std::size_t(pos), X.grid().steps - 1);
    const double frac = pos - double(k);
    return g[k] * (1.0 - frac) + g[k + 1] * frac;
  };
  return sigma * std::exp(interp(t) - interp(s));
}

double rkhs_inner_product(std::span<const double> phi, std::span<const double> psi,
                          double dt, double hurst) {
  if (!(hurst > 0.5 && hurst < 1))
    throw std::invalid_argument("rkhs_inner_product: H in (1/2,1) required");
  if (phi.size() != psi.size() || phi.empty())
    throw std::invalid_argument("rkhs_inner_product: size mismatch");
  if (!(dt > 0)) throw std::invalid_argument("rkhs_inner_product: dt <= 0");
  const std::size_t n = phi.size();
  const auto gamma = fgn_autocovariance(n, dt, hurst);
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0;
    for (std::size_t j = 0; j < n; ++j)
      row += psi[j] * gamma[i > j ? i - j : j - i];
    sum += phi[i] * row;
  }
  return sum;
}

namespace {

// Malliavin row of X_t over the grid cells, evaluated at cell midpoints:
// row[j] = sigma exp(G(t_n) - G(s_{j+1/2})).
std::vector<double> malliavin_row(const DriftSpec& spec, std::span<const double> knots,
                                  double dt, double sigma) {
  const auto g = bdot_cumulative(spec, knots, dt);
  const std::size_t n = knots.size() - 1;
  std::vector<double> row(n);
  for (std::size_t j = 0; j < n; ++j)
    row[j] = sigma * std::exp(g[n] - 0.5 * (g[j] + g[j + 1]));
  return row;
}

std::vector<double> solve_knots(const DriftSpec& spec, double sigma, double x0,
                                const TimeGrid& grid, std::span<const double> increments) {
  const double dt = grid.dt();
  std::vector<double> knots(grid.steps + 1);
  knots[0] = x0;
  for (std::size_t k = 0; k < grid.steps; ++k)
    knots[k + 1] = implicit_step(spec, knots[k] + sigma * increments[k], dt, knots[k]);
  return knots;
}

}  // namespace

NvDensity nv_density_estimate(const DriftSpec& spec, double sigma, double x0,
                              double t, std::span<const double> x_grid,
                              const NvOptions& options, std::uint64_t seed) {
  if (!(options.hurst > 0.5 && options.hurst < 1))
    throw std::invalid_argument("nv_density_estimate: H in (1/2,1) required");
  if (!(t > 0)) throw std::invalid_argument("nv_density_estimate: t <= 0");
  if (!(sigma > 0)) throw std::invalid_argument("nv_density_estimate: sigma <= 0");
  if (x_grid.size() < 3 || !std::is_sorted(x_grid.begin(), x_grid.end()))
    throw std::invalid_argument("nv_density_estimate: x_grid must be sorted, size >= 3");
  if (options.paths < 64)
    throw std::invalid_argument("nv_density_estimate: need at least 64 paths");

  NvDensity result;
  result.x.assign(x_grid.begin(), x_grid.end());

  std::size_t bins = options.bins;
  if (options.paths < 4 * bins) {
    bins = std::max<std::size_t>(4, options.paths / 8);
    result.warnings.push_back("bins widened to " + std::to_string(bins) +
                              " (too few paths per bin)");
  }

  const std::size_t n = options.steps;
  const std::size_t P = options.paths;
  const std::size_t M = options.mehler_nodes;
  const TimeGrid grid{t, n};
  const double dt = grid.dt();
  const auto quad = gauss_legendre(options.quad_nodes, options.u_max);

  NoiseConfig base;
  base.hurst = options.hurst;
  base.holder_alpha = options.holder_alpha;
  base.horizon = t;
  base.steps = n;
  base.seed = seed;

  std::vector<double> x_t(P);
  std::vector<double> q(P);  // <D X_t, -D L^{-1} X_t>_H per sample

  parallel_for(P, [&](std::size_t i) {
    NoiseConfig cfg = base;
    cfg.stream = stream::density_main;
    cfg.replication = i;
    const FbmPath omega = sample_fbm(cfg);
    const auto knots = solve_knots(spec, sigma, x0, grid, omega.increments);
    x_t[i] = knots.back();
    const auto row = malliavin_row(spec, knots, dt, sigma);

    // fresh paths shared across quadrature nodes
    std::vector<std::vector<double>> fresh(M);
    for (std::size_t m = 0; m < M; ++m) {
      NoiseConfig mc = base;
      mc.stream = stream::density_mehler;
      mc.replication = i * M + m;
      fresh[m] = sample_fbm(mc).increments;
    }

    std::vector<double> mixed(n);
    std::vector<double> dl_row(n, 0.0);  // -D L^{-1} X_t as a cell row
    for (std::size_t iq = 0; iq < quad.nodes.size(); ++iq) {
      const double decay = std::exp(-quad.nodes[iq]);
      const double spread = std::sqrt(1.0 - decay * decay);
      const double weight = quad.weights[iq] * decay / double(M);
      for (std::size_t m = 0; m < M; ++m) {
        for (std::size_t k = 0; k < n; ++k)
          mixed[k] = decay * omega.increments[k] + spread * fresh[m][k];
        const auto mixed_knots = solve_knots(spec, sigma, x0, grid, mixed);
        const auto mixed_row = malliavin_row(spec, mixed_knots, dt, sigma);
        for (std::size_t k = 0; k < n; ++k) dl_row[k] += weight * mixed_row[k];
      }
    }
    q[i] = rkhs_inner_product(row, dl_row, dt, options.hurst);
  });

  // equal-mass binned conditional mean g(x) = E[q | X_t = x]
  std::vector<std::size_t> order(P);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x_t[a] < x_t[b]; });
  std::vector<double> bin_center(bins), bin_g(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    const std::size_t lo = b * P / bins;
    const std::size_t hi = (b + 1) * P / bins;
    if (hi == lo) throw numerical_error("nv_density_estimate: empty bin");
    double cx = 0, cg = 0;
    for (std::size_t j = lo; j < hi; ++j) {
      cx += x_t[order[j]];
      cg += q[order[j]];
    }
    bin_center[b] = cx / double(hi - lo);
    bin_g[b] = cg / double(hi - lo);
    if (!(bin_g[b] > 0))
      throw numerical_error("nv_density_estimate: nonpositive conditional variance");
  }
  auto g_hat = [&](double x) {
    if (x <= bin_center.front()) return bin_g.front();
    if (x >= bin_center.back()) return bin_g.back();
    const auto it = std::upper_bound(bin_center.begin(), bin_center.end(), x);
    const std::size_t j = std::size_t(it - bin_center.begin());
    const double frac = (x - bin_center[j - 1]) / (bin_center[j] - bin_center[j - 1]);
    return bin_g[j - 1] * (1.0 - frac) + bin_g[j] * frac;
  };

  const double m_hat = mean(x_t);
  double e_abs = 0;
  for (double v : x_t) e_abs += std::abs(v - m_hat);
  e_abs /= double(P);

  // f(x) = E|X_t - m| / (2 g(x)) * exp(-int_m^x (y-m)/g(y) dy)
  const std::size_t G = x_grid.size();
  std::vector<double> psi(G), integral(G, 0.0);
  for (std::size_t j = 0; j < G; ++j) psi[j] = (x_grid[j] - m_hat) / g_hat(x_grid[j]);
  // anchor the trapezoid at m_hat (psi vanishes there)
  std::size_t j0 = 0;
  while (j0 + 1 < G && x_grid[j0 + 1] < m_hat) ++j0;
  integral[j0] = -0.5 * psi[j0] * (m_hat - x_grid[j0]);
  for (std::size_t j = j0; j + 1 < G; ++j)
    integral[j + 1] = integral[j] + 0.5 * (psi[j] + psi[j + 1]) * (x_grid[j + 1] - x_grid[j]);
  for (std::size_t j = j0; j > 0; --j)
    integral[j - 1] = integral[j] - 0.5 * (psi[j] + psi[j - 1]) * (x_grid[j] - x_grid[j - 1]);

  result.density.resize(G);
  for (std::size_t j = 0; j < G; ++j)
    result.density[j] = e_abs / (2.0 * g_hat(x_grid[j])) * std::exp(-integral[j]);
  return result;
}

double Histogram::value_at(double x) const {
  if (x < edges.front() || x > edges.back()) return 0.0;
  const auto it = std::upper_bound(edges.begin(), edges.end(), x);
  std::size_t k = (it == edges.begin()) ? 0 : std::size_t(it - edges.begin() - 1);
  if (k >= density.size()) k = density.size() - 1;
  return density[k];
}

Histogram empirical_density(std::span<const double> samples, std::size_t bins) {
  if (samples.size() < 100)
    throw std::invalid_argument("empirical_density: need at least 100 samples");
  if (bins < 1) throw std::invalid_argument("empirical_density: bins < 1");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) {
    // constant samples: a single spike of unit mass around the value
    const double pad = std::max(1e-12, std::abs(lo) * 1e-12);
    Histogram h;
    h.edges = {lo - pad, lo + pad};
    h.density = {1.0 / (2.0 * pad)};
    return h;
  }
  Histogram h;
  h.edges.resize(bins + 1);
  const double w = (hi - lo) / double(bins);
  for (std::size_t k = 0; k <= bins; ++k) h.edges[k] = lo + double(k) * w;
  std::vector<std::size_t> counts(bins, 0);
  for (double x : samples) {
    std::size_t k = std::size_t((x - lo) / w);
    if (k >= bins) k = bins - 1;
    ++counts[k];
  }
  h.density.resize(bins);
  for (std::size_t k = 0; k < bins; ++k)
    h.density[k] = double(counts[k]) / (double(samples.size()) * w);
  return h;
}

}  // namespace fsde
