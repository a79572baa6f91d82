#include "fsde/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>

#include "fsde/config.hpp"
#include "fsde/csv.hpp"
#include "fsde/estimate.hpp"
#include "fsde/heston.hpp"
#include "fsde/longrun.hpp"
#include "fsde/malliavin.hpp"
#include "fsde/scheme.hpp"
#include "fsde/transform.hpp"

namespace fsde::cli {

namespace {

struct Flags {
  std::string config_path;
  std::string out_dir = ".";
  std::string tag;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> steps;
  std::optional<double> horizon;
  std::optional<double> hurst;
  std::optional<double> alpha;
  std::optional<double> sigma;
  std::optional<double> x0;
  // subcommand extras
  std::string input_csv;
  std::string noise_out;
  std::optional<std::string> phi;
  std::optional<std::size_t> reference_n;
  std::optional<std::size_t> n_max;
  std::optional<std::size_t> paths;
  std::optional<double> t_star;
  std::optional<double> level;
  std::optional<double> density_t;
  std::optional<double> zeta;
  std::optional<double> z0;
};

std::string default_tag() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm_buf{};
  localtime_r(&now, &tm_buf);
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm_buf);
  return buf;
}

ExperimentConfig resolve(const Flags& flags) {
  ExperimentConfig cfg;
  if (!flags.config_path.empty()) cfg = load_config(flags.config_path);
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.reps) cfg.reps = *flags.reps;
  if (flags.steps) cfg.steps = *flags.steps;
  if (flags.horizon) cfg.horizon = *flags.horizon;
  if (flags.hurst) cfg.hurst = *flags.hurst;
  if (flags.alpha) cfg.alpha = *flags.alpha;
  if (flags.sigma) cfg.sigma = *flags.sigma;
  if (flags.x0) cfg.x0 = *flags.x0;
  if (!flags.input_csv.empty()) cfg.estimate_input = flags.input_csv;
  if (flags.phi) cfg.phi = *flags.phi;
  if (flags.reference_n) cfg.reference_n = *flags.reference_n;
  if (flags.n_max) cfg.pullback_n_max = *flags.n_max;
  if (flags.paths) cfg.density_paths = *flags.paths;
  if (flags.t_star) cfg.t_star = *flags.t_star;
  if (flags.level) cfg.hitting_level = *flags.level;
  if (flags.density_t) cfg.density_t = *flags.density_t;
  if (flags.zeta) cfg.heston_zeta = *flags.zeta;
  if (flags.z0) cfg.heston_z0 = *flags.z0;
  return cfg;
}

std::string out_path(const Flags& flags, const std::string& subcommand) {
  const std::string tag = flags.tag.empty() ? default_tag() : flags.tag;
  std::filesystem::create_directories(flags.out_dir);
  return (std::filesystem::path(flags.out_dir) / (subcommand + "-" + tag + ".csv"))
      .string();
}

NoiseConfig noise_config(const ExperimentConfig& cfg, std::uint64_t stream_id,
                         std::uint64_t rep) {
  NoiseConfig noise;
  noise.hurst = cfg.hurst;
  noise.holder_alpha = cfg.alpha;
  noise.horizon = cfg.horizon;
  noise.steps = cfg.steps;
  noise.seed = cfg.seed;
  noise.method = cfg.method;
  noise.stream = stream_id;
  noise.replication = rep;
  return noise;
}

int run_check_drift(const ExperimentConfig& cfg) {
  const DriftSpec spec(cfg.drift, cfg.params);
  const auto report = check_admissibility(spec, cfg.alpha);
  std::cout << "drift " << to_string(cfg.drift)
            << (report.admissible ? ": admissible" : ": rejected")
            << ", K=" << CsvWriter::format(report.contraction_K)
            << ", R=" << CsvWriter::format(report.growth_R);
  if (report.admissible)
    std::cout << ", x_b=" << CsvWriter::format(spec.root());
  std::cout << "\n";
  for (const auto& reason : report.reasons) std::cout << "  - " << reason << "\n";
  return report.admissible ? 0 : 2;
}

int run_simulate(const ExperimentConfig& cfg, const Flags& flags) {
  const DriftSpec spec = cfg.make_drift();
  const TimeGrid grid{cfg.horizon, cfg.steps};
  const FbmPath driver = sample_fbm(noise_config(cfg, stream::noise, 0));
  const EulerPath path = solve_path(spec, cfg.sigma, cfg.x0, grid, driver);

  CsvWriter csv(out_path(flags, "simulate"));
  csv.comment("fsde simulate " + cfg.metadata());
  const std::vector<std::string> cols{"t", "x"};
  csv.header(cols);
  for (std::size_t k = 0; k <= grid.steps; ++k)
    csv.row(std::vector<double>{grid.time(k), path.knots()[k]});

  if (!flags.noise_out.empty()) {
    CsvWriter ncsv(flags.noise_out);
    ncsv.comment("fsde simulate driver " + cfg.metadata());
    const std::vector<std::string> ncols{"t", "value"};
    ncsv.header(ncols);
    for (std::size_t k = 0; k <= grid.steps; ++k)
      ncsv.row(std::vector<double>{grid.time(k), driver.values[k]});
  }
  std::cout << "simulate: wrote " << grid.steps + 1 << " knots\n";
  return 0;
}

int run_convergence(const ExperimentConfig& cfg, const Flags& flags) {
  const DriftSpec spec = cfg.make_drift();
  const auto result =
      convergence_study(spec, cfg.sigma, cfg.x0, cfg.hurst, cfg.alpha, cfg.n_list,
                        cfg.reference_n, cfg.reps, cfg.seed, cfg.horizon);
  CsvWriter csv(out_path(flags, "convergence"));
  csv.comment("fsde convergence " + cfg.metadata() + " reference_n=" +
              std::to_string(cfg.reference_n));
  const std::vector<std::string> cols{"n", "median_sup_error", "q25", "q75"};
  csv.header(cols);
  for (const auto& row : result.rows)
    csv.row(std::vector<double>{double(row.n), row.median_sup_error, row.q25, row.q75});
  std::cout << "convergence: slope=" << CsvWriter::format(result.slope) << "\n";
  return 0;
}

int run_ergodic(const ExperimentConfig& cfg, const Flags& flags) {
  const DriftSpec spec = cfg.make_drift();
  const TimeGrid grid{cfg.horizon, cfg.steps};
  const FbmPath driver = sample_fbm(noise_config(cfg, stream::ergodic, 0));
  const EulerPath path = solve_path(spec, cfg.sigma, cfg.x0, grid, driver);
  const auto phi = phi_from_tag(cfg.phi);

  CsvWriter csv(out_path(flags, "ergodic"));
  csv.comment("fsde ergodic " + cfg.metadata() + " phi=" + cfg.phi);
  const std::vector<std::string> cols{"T", "average"};
  csv.header(cols);
  // running trapezoid prefix averages at ~256 checkpoints
  const std::size_t stride = std::max<std::size_t>(1, grid.steps / 256);
  double acc = 0;
  double prev = phi(path.knots()[0]);
  for (std::size_t k = 1; k <= grid.steps; ++k) {
    const double cur = phi(path.knots()[k]);
    acc += 0.5 * grid.dt() * (prev + cur);
    prev = cur;
    if (k % stride == 0 || k == grid.steps)
      csv.row(std::vector<double>{grid.time(k), acc / grid.time(k)});
  }
  std::cout << "ergodic: I_T=" << CsvWriter::format(acc / grid.horizon) << "\n";
  return 0;
}

int run_pullback(const ExperimentConfig& cfg, const Flags& flags) {
  const DriftSpec spec = cfg.make_drift();
  const auto run = pullback_sequence(spec, cfg.sigma, cfg.x0, cfg.pullback_n_max,
                                     cfg.seed, cfg.hurst, cfg.steps_per_unit);
  CsvWriter csv(out_path(flags, "pullback"));
  csv.comment("fsde pullback " + cfg.metadata() + " n_max=" +
              std::to_string(cfg.pullback_n_max));
  const std::vector<std::string> cols{"n", "X_n", "gap"};
  csv.header(cols);
  for (std::size_t n = 0; n < run.values.size(); ++n) {
    const double gap = (n < run.gaps.size()) ? run.gaps[n] : std::nan("");
    csv.row(std::vector<double>{double(n), run.values[n], gap});
  }
  std::cout << "pullback: fitted decay rate=" << CsvWriter::format(run.fitted_rate)
            << "\n";
  return 0;
}

int run_hitting(const ExperimentConfig& cfg, const Flags& flags) {
  const DriftSpec spec = cfg.make_drift();
  const TimeGrid grid{cfg.horizon, cfg.steps};
  const double level = (cfg.hitting_level > 0) ? cfg.hitting_level : spec.root();

  std::vector<double> taus(cfg.reps, std::nan(""));
  parallel_for(cfg.reps, [&](std::size_t rep) {
    const FbmPath driver = sample_fbm(noise_config(cfg, stream::hitting, rep));
    const EulerPath path = solve_path(spec, cfg.sigma, cfg.x0, grid, driver);
    if (const auto tau = hitting_time(path, level, cfg.t_star)) taus[rep] = *tau;
  });

  CsvWriter csv(out_path(flags, "hitting"));
  csv.comment("fsde hitting " + cfg.metadata() + " level=" + CsvWriter::format(level) +
              " t_star=" + CsvWriter::format(cfg.t_star));
  const std::vector<std::string> cols{"rep", "tau"};
  csv.header(cols);
  std::size_t hit = 0;
  for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
    if (!std::isnan(taus[rep])) ++hit;
    csv.row(std::vector<double>{double(rep), taus[rep]});
  }
  std::cout << "hitting: fraction=" << CsvWriter::format(double(hit) / double(cfg.reps))
            << "\n";
  return 0;
}

int run_estimate(const ExperimentConfig& cfg, const Flags& flags) {
  const DriftSpec spec = cfg.make_drift();
  CsvWriter csv(out_path(flags, "estimate"));
  csv.comment("fsde estimate " + cfg.metadata());
  const std::vector<std::string> cols{"rep", "h_hat", "sigma_hat", "v1", "v2"};
  csv.header(cols);

  if (!cfg.estimate_input.empty()) {
    const auto table = read_csv(cfg.estimate_input);
    const auto x = table.column("x");
    if (x.size() < 5) throw std::invalid_argument("estimate: input too short");
    const auto t = table.column("t");
    const double horizon = t.back();
    const auto result = estimate_from_observations(spec, x, horizon, x.size() - 1);
    csv.row(std::vector<double>{0.0, result.h_hat, result.sigma_hat, result.v1,
                                result.v2});
    std::cout << "estimate: h_hat=" << CsvWriter::format(result.h_hat)
              << " sigma_hat=" << CsvWriter::format(result.sigma_hat) << "\n";
    return 0;
  }

  const TimeGrid grid{cfg.horizon, cfg.steps};
  std::vector<EstimationResult> results(cfg.reps);
  parallel_for(cfg.reps, [&](std::size_t rep) {
    const FbmPath driver = sample_fbm(noise_config(cfg, stream::estimate, rep));
    const EulerPath path = solve_path(spec, cfg.sigma, cfg.x0, grid, driver);
    results[rep] = estimate_from_observations(spec, path.knots(), cfg.horizon, cfg.steps);
  });
  double h_sum = 0;
  for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
    const auto& r = results[rep];
    h_sum += r.h_hat;
    csv.row(std::vector<double>{double(rep), r.h_hat, r.sigma_hat, r.v1, r.v2});
  }
  std::cout << "estimate: mean h_hat=" << CsvWriter::format(h_sum / double(cfg.reps))
            << " (" << cfg.reps << " reps)\n";
  return 0;
}

int run_density(const ExperimentConfig& cfg, const Flags& flags) {
  const DriftSpec spec = cfg.make_drift();
  const double t = cfg.density_t;

  // histogram oracle from fresh paths
  const TimeGrid grid{t, cfg.steps};
  std::vector<double> samples(cfg.hist_samples);
  parallel_for(cfg.hist_samples, [&](std::size_t rep) {
    NoiseConfig noise = noise_config(cfg, stream::density_hist, rep);
    noise.horizon = t;
    const FbmPath driver = sample_fbm(noise);
    samples[rep] = solve_path(spec, cfg.sigma, cfg.x0, grid, driver).knots().back();
  });
  const Histogram hist = empirical_density(samples, cfg.hist_bins);

  std::vector<double> x_grid(cfg.grid_points);
  const double lo = quantile(samples, 0.005), hi = quantile(samples, 0.995);
  for (std::size_t i = 0; i < x_grid.size(); ++i)
    x_grid[i] = lo + (hi - lo) * double(i) / double(x_grid.size() - 1);

  NvOptions options;
  options.paths = cfg.density_paths;
  options.mehler_nodes = cfg.mehler_nodes;
  options.bins = cfg.bins;
  options.steps = cfg.steps;
  options.u_max = cfg.u_max;
  options.hurst = cfg.hurst;
  options.holder_alpha = cfg.alpha;
  const NvDensity nv = nv_density_estimate(spec, cfg.sigma, cfg.x0, t, x_grid,
                                           options, cfg.seed);

  CsvWriter csv(out_path(flags, "density"));
  csv.comment("fsde density " + cfg.metadata() + " t=" + CsvWriter::format(t) +
              " paths=" + std::to_string(cfg.density_paths));
  for (const auto& warning : nv.warnings) csv.comment("warning: " + warning);
  const std::vector<std::string> cols{"x", "f_nv", "f_hist"};
  csv.header(cols);
  double mass = 0;
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    csv.row(std::vector<double>{x_grid[i], nv.density[i], hist.value_at(x_grid[i])});
    if (i + 1 < x_grid.size())
      mass += 0.5 * (nv.density[i] + nv.density[i + 1]) * (x_grid[i + 1] - x_grid[i]);
  }
  std::cout << "density: integral=" << CsvWriter::format(mass) << "\n";
  return 0;
}

int run_heston(const ExperimentConfig& cfg, const Flags& flags) {
  HestonConfig model;
  model.spot = cfg.heston_spot;
  model.z0 = cfg.heston_z0;
  model.v = cfg.heston_v;
  model.w = cfg.heston_w;
  model.zeta = cfg.heston_zeta;
  model.gamma = cfg.heston_gamma;
  model.hurst = cfg.hurst;
  model.mu = RateFn::constant(cfg.heston_mu);
  model.rate = RateFn::constant(cfg.heston_r);
  model.grid = TimeGrid{cfg.horizon, cfg.steps};
  model.seed = cfg.seed;

  CsvWriter csv(out_path(flags, "heston"));
  csv.comment("fsde heston " + cfg.metadata() + " z0=" + CsvWriter::format(model.z0) +
              " v=" + CsvWriter::format(model.v) + " w=" + CsvWriter::format(model.w) +
              " zeta=" + CsvWriter::format(model.zeta) + " gamma=" +
              CsvWriter::format(model.gamma));
  const HestonRunner runner(model);

  if (cfg.reps <= 1) {
    const HestonPath path = runner.run(0);
    const std::vector<std::string> cols{"t", "Z", "S", "S_discounted"};
    csv.header(cols);
    for (std::size_t k = 0; k <= model.grid.steps; ++k)
      csv.row(std::vector<double>{model.grid.time(k), path.z[k], path.s[k],
                                  path.s_discounted[k]});
    return 0;
  }

  std::vector<HestonPath> paths(cfg.reps);
  parallel_for(cfg.reps, [&](std::size_t rep) { paths[rep] = runner.run(rep); });
  const std::vector<std::string> cols{"t",      "z_q25",  "z_q50",  "z_q75", "s_q25",
                                      "s_q50",  "s_q75",  "sd_q25", "sd_q50", "sd_q75"};
  csv.header(cols);
  for (std::size_t k = 0; k <= model.grid.steps; ++k) {
    std::vector<double> zs(cfg.reps), ss(cfg.reps), ds(cfg.reps);
    for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
      zs[rep] = paths[rep].z[k];
      ss[rep] = paths[rep].s[k];
      ds[rep] = paths[rep].s_discounted[k];
    }
    csv.row(std::vector<double>{model.grid.time(k), quantile(zs, 0.25),
                                quantile(zs, 0.50), quantile(zs, 0.75),
                                quantile(ss, 0.25), quantile(ss, 0.50),
                                quantile(ss, 0.75), quantile(ds, 0.25),
                                quantile(ds, 0.50), quantile(ds, 0.75)});
  }
  std::cout << "heston: " << cfg.reps << " paths summarized\n";
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"simulation and estimation toolkit for singular SDEs driven by "
               "fractional Gaussian noise"};
  app.require_subcommand(1);
  Flags flags;

  const std::vector<std::string> names{"check-drift", "simulate", "convergence",
                                       "ergodic",     "pullback", "hitting",
                                       "estimate",    "density",  "heston"};
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", flags.config_path, "config file (sectioned key=value)");
    sub->add_option("--seed", flags.seed, "master seed");
    sub->add_option("--out", flags.out_dir, "output directory");
    sub->add_option("--tag", flags.tag, "output filename tag (default: timestamp)");
    sub->add_option("--reps", flags.reps, "Monte Carlo replications");
    sub->add_option("--n", flags.steps, "grid steps");
    sub->add_option("--T", flags.horizon, "grid horizon");
    sub->add_option("--hurst", flags.hurst, "Hurst parameter");
    sub->add_option("--alpha", flags.alpha, "working Holder exponent");
    sub->add_option("--sigma", flags.sigma, "noise amplitude");
    sub->add_option("--x0", flags.x0, "initial condition");
    subs[name] = sub;
  }
  subs["simulate"]->add_option("--noise-out", flags.noise_out,
                               "also write the driver path CSV here");
  subs["estimate"]->add_option("--input", flags.input_csv,
                               "estimate from an existing path CSV");
  subs["ergodic"]->add_option("--phi", flags.phi, "test function tag");
  subs["convergence"]->add_option("--reference-n", flags.reference_n,
                                  "reference grid resolution");
  subs["pullback"]->add_option("--n-max", flags.n_max, "pullback depth");
  subs["hitting"]->add_option("--t-star", flags.t_star, "restart time");
  subs["hitting"]->add_option("--level", flags.level, "level to hit (default x_b)");
  subs["density"]->add_option("--paths", flags.paths, "Monte Carlo samples");
  subs["density"]->add_option("--t", flags.density_t, "evaluation time");
  subs["heston"]->add_option("--zeta", flags.zeta, "vol-of-vol");
  subs["heston"]->add_option("--z0", flags.z0, "initial variance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const ExperimentConfig cfg = resolve(flags);
    if (subs["check-drift"]->parsed()) return run_check_drift(cfg);
    if (subs["simulate"]->parsed()) return run_simulate(cfg, flags);
    if (subs["convergence"]->parsed()) return run_convergence(cfg, flags);
    if (subs["ergodic"]->parsed()) return run_ergodic(cfg, flags);
    if (subs["pullback"]->parsed()) return run_pullback(cfg, flags);
    if (subs["hitting"]->parsed()) return run_hitting(cfg, flags);
    if (subs["estimate"]->parsed()) return run_estimate(cfg, flags);
    if (subs["density"]->parsed()) return run_density(cfg, flags);
    if (subs["heston"]->parsed()) return run_heston(cfg, flags);
    std::cerr << "fsde: no subcommand\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "fsde: numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const resource_error& e) {
    std::cerr << "fsde: resource limit: " << e.what() << "\n";
    return 3;
  } catch (const std::logic_error& e) {
    std::cerr << "fsde: invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "fsde: error: " << e.what() << "\n";
    return 1;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("fsde");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(int(argv.size()), argv.data());
}

}  // namespace fsde::cli
