#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fsde/cli.hpp"
#include "fsde/config.hpp"
#include "fsde/csv.hpp"
#include "fsde/estimate.hpp"
#include "fsde/scheme.hpp"

using namespace fsde;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("fsde-test-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
  std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("check-drift exit codes follow admissibility") {
  CHECK(cli::run({"check-drift", "--alpha", "0.6"}) == 0);
  // b2 with gamma = 2 fails at alpha = 0.4
  TempDir dir;
  const auto cfg_path = dir.path / "b2.cfg";
  std::ofstream(cfg_path) << "[model]\ndrift = b2\ngamma = 2\n[noise]\nalpha = 0.4\n";
  CHECK(cli::run({"check-drift", "--config", cfg_path.string()}) == 2);
}

TEST_CASE("simulate is byte-identical for a fixed seed") {
  TempDir a, b;
  const std::vector<std::string> common{"simulate", "--n",   "128",  "--seed",
                                        "42",       "--tag", "det"};
  auto run_a = common;
  run_a.push_back("--out");
  run_a.push_back(a.str());
  auto run_b = common;
  run_b.push_back("--out");
  run_b.push_back(b.str());
  REQUIRE(cli::run(run_a) == 0);
  REQUIRE(cli::run(run_b) == 0);
  CHECK(slurp(a.path / "simulate-det.csv") == slurp(b.path / "simulate-det.csv"));
}

TEST_CASE("config file values load and flags override them") {
  TempDir dir;
  const auto cfg_path = dir.path / "exp.cfg";
  std::ofstream(cfg_path) << "[model]\nsigma = 0.5\n[grid]\nn = 64\n[mc]\nseed = 9\n";

  REQUIRE(cli::run({"simulate", "--config", cfg_path.string(), "--out", dir.str(),
                    "--tag", "file"}) == 0);
  const std::string from_file = slurp(dir.path / "simulate-file.csv");
  CHECK(from_file.find("sigma=0.5") != std::string::npos);
  CHECK(from_file.find("n=64") != std::string::npos);

  REQUIRE(cli::run({"simulate", "--config", cfg_path.string(), "--out", dir.str(),
                    "--tag", "flag", "--sigma", "0.25"}) == 0);
  CHECK(slurp(dir.path / "simulate-flag.csv").find("sigma=0.25") != std::string::npos);
}

TEST_CASE("unknown config keys are rejected with exit 2") {
  TempDir dir;
  const auto cfg_path = dir.path / "bad.cfg";
  std::ofstream(cfg_path) << "[model]\nsgima = 0.5\n";
  CHECK(cli::run({"simulate", "--config", cfg_path.string(), "--out", dir.str()}) == 2);
}

TEST_CASE("estimate --input round-trips the simulate output") {
  TempDir dir;
  REQUIRE(cli::run({"simulate", "--n", "1024", "--seed", "31", "--tag", "path",
                    "--out", dir.str()}) == 0);
  REQUIRE(cli::run({"estimate", "--input", (dir.path / "simulate-path.csv").string(),
                    "--tag", "rt", "--out", dir.str(), "--n", "1024", "--seed",
                    "31"}) == 0);

  // the CSV-mediated estimate must match the fused in-process pipeline
  const auto table = read_csv((dir.path / "estimate-rt.csv").string());
  const double h_csv = table.column("h_hat").at(0);
  const double s_csv = table.column("sigma_hat").at(0);

  ExperimentConfig cfg;  // defaults mirror the CLI defaults
  cfg.steps = 1024;
  cfg.seed = 31;
  const DriftSpec spec = cfg.make_drift();
  NoiseConfig noise;
  noise.hurst = cfg.hurst;
  noise.holder_alpha = cfg.alpha;
  noise.horizon = cfg.horizon;
  noise.steps = cfg.steps;
  noise.seed = cfg.seed;
  noise.stream = stream::noise;
  const auto driver = sample_fbm(noise);
  const auto path = solve_path(spec, cfg.sigma, cfg.x0, TimeGrid{1.0, 1024}, driver);
  const auto direct = estimate_from_observations(spec, path.knots(), 1.0, 1024);
  CHECK(h_csv == doctest::Approx(direct.h_hat).epsilon(1e-12));
  CHECK(s_csv == doctest::Approx(direct.sigma_hat).epsilon(1e-12));
}

TEST_CASE("degenerate estimator input exits with code 3") {
  TempDir dir;
  const auto path = dir.path / "flat.csv";
  {
    CsvWriter csv(path.string());
    const std::vector<std::string> cols{"t", "x"};
    csv.header(cols);
    for (int k = 0; k <= 16; ++k)
      csv.row(std::vector<double>{k / 16.0, 1.0});
  }
  CHECK(cli::run({"estimate", "--input", path.string(), "--out", dir.str(),
                  "--tag", "degenerate"}) == 3);
}

TEST_CASE("ini parser essentials") {
  const auto ini = parse_ini("# comment\n[a]\nx = 1\ny = hello ; trailing\n[b]\n");
  CHECK(ini.at("a").at("x") == "1");
  CHECK(ini.at("a").at("y") == "hello");
  CHECK(ini.count("b") == 1);
  CHECK_THROWS_AS(parse_ini("[broken\nx=1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_ini("[a]\nnoequals\n"), std::invalid_argument);
}

}  // TEST_SUITE
