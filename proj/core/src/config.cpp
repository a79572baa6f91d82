#include "fsde/config.hpp"

#include <fstream>
#include <sstream>

#include "fsde/csv.hpp"

namespace fsde {

namespace {

std::string trim(const std::string& s) {
  const auto from = s.find_first_not_of(" \t\r");
  if (from == std::string::npos) return "";
  const auto to = s.find_last_not_of(" \t\r");
  return s.substr(from, to - from + 1);
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad numeric value '" + v + "' for " + key);
  }
}

std::size_t parse_size(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size() || x < 0) throw std::invalid_argument(v);
    return std::size_t(x);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer value '" + v + "' for " + key);
  }
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const unsigned long long x = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad seed value '" + v + "' for " + key);
  }
}

FbmMethod method_from_string(const std::string& name) {
  if (name == "circulant_embedding") return FbmMethod::circulant_embedding;
  if (name == "cholesky") return FbmMethod::cholesky;
  if (name == "auto") return FbmMethod::auto_select;
  throw std::invalid_argument("config: unknown noise method '" + name + "'");
}

std::string method_to_string(FbmMethod m) {
  switch (m) {
    case FbmMethod::circulant_embedding: return "circulant_embedding";
    case FbmMethod::cholesky: return "cholesky";
    case FbmMethod::auto_select: return "auto";
  }
  return "auto";
}

std::vector<std::size_t> parse_size_list(const std::string& v, const std::string& key) {
  std::vector<std::size_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ' ')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_size(item, key));
  }
  if (out.empty()) throw std::invalid_argument("config: empty list for " + key);
  return out;
}

}  // namespace

IniData parse_ini(const std::string& text) {
  IniData data;
  std::string section;
  std::stringstream ss(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config: malformed section at line " +
                                    std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      data.try_emplace(section);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value at line " +
                                  std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config: empty key at line " +
                                                 std::to_string(lineno));
    data[section][key] = value;
  }
  return data;
}

IniData load_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_ini(ss.str());
}

ExperimentConfig config_from_ini(const IniData& ini) {
  ExperimentConfig cfg;
  for (const auto& [section, entries] : ini) {
    for (const auto& [key, value] : entries) {
      const std::string where = "[" + section + "] " + key;
      if (section == "model") {
        if (key == "drift") cfg.drift = drift_family_from_string(value);
        else if (key == "u") cfg.params.u = parse_double(value, where);
        else if (key == "v") cfg.params.v = parse_double(value, where);
        else if (key == "w") cfg.params.w = parse_double(value, where);
        else if (key == "gamma") cfg.params.gamma = parse_double(value, where);
        else if (key == "lambda") cfg.params.lambda = parse_double(value, where);
        else if (key == "mu") cfg.params.mu = parse_double(value, where);
        else if (key == "sigma") cfg.sigma = parse_double(value, where);
        else if (key == "x0") cfg.x0 = parse_double(value, where);
        else throw std::invalid_argument("config: unknown key " + where);
      } else if (section == "noise") {
        if (key == "hurst") cfg.hurst = parse_double(value, where);
        else if (key == "alpha") cfg.alpha = parse_double(value, where);
        else if (key == "method") cfg.method = method_from_string(value);
        else throw std::invalid_argument("config: unknown key " + where);
      } else if (section == "grid") {
        if (key == "T") cfg.horizon = parse_double(value, where);
        else if (key == "n") cfg.steps = parse_size(value, where);
        else throw std::invalid_argument("config: unknown key " + where);
      } else if (section == "mc") {
        if (key == "reps") cfg.reps = parse_size(value, where);
        else if (key == "seed") cfg.seed = parse_u64(value, where);
        else throw std::invalid_argument("config: unknown key " + where);
      } else if (section == "estimate") {
        if (key == "input") cfg.estimate_input = value;
        else throw std::invalid_argument("config: unknown key " + where);
      } else if (section == "ergodic") {
        if (key == "phi") cfg.phi = value;
        else throw std::invalid_argument("config: unknown key " + where);
      } else if (section == "pullback") {
        if (key == "n_max") cfg.pullback_n_max = parse_size(value, where);
        else if (key == "steps_per_unit") cfg.steps_per_unit = parse_size(value, where);
        else throw std::invalid_argument("config: unknown key " + where);
      } else if (section == "hitting") {
        if (key == "t_star") cfg.t_star = parse_double(value, where);
        else if (key == "level") cfg.hitting_level = parse_double(value, where);
        else throw std::invalid_argument("config: unknown key " + where);
      } else if (section == "convergence") {
        if (key == "n_list") cfg.n_list = parse_size_list(value, where);
        else if (key == "reference_n") cfg.reference_n = parse_size(value, where);
        else throw std::invalid_argument("config: unknown key " + where);
      } else if (section == "density") {
        if (key == "paths") cfg.density_paths = parse_size(value, where);
        else if (key == "mehler_nodes") cfg.mehler_nodes = parse_size(value, where);
        else if (key == "u_max") cfg.u_max = parse_double(value, where);
        else if (key == "bins") cfg.bins = parse_size(value, where);
        else if (key == "hist_samples") cfg.hist_samples = parse_size(value, where);
        else if (key == "hist_bins") cfg.hist_bins = parse_size(value, where);
        else if (key == "grid_points") cfg.grid_points = parse_size(value, where);
        else if (key == "t") cfg.density_t = parse_double(value, where);
        else throw std::invalid_argument("config: unknown key " + where);
      } else if (section == "heston") {
        if (key == "S0") cfg.heston_spot = parse_double(value, where);
        else if (key == "z0") cfg.heston_z0 = parse_double(value, where);
        else if (key == "v") cfg.heston_v = parse_double(value, where);
        else if (key == "w") cfg.heston_w = parse_double(value, where);
        else if (key == "zeta") cfg.heston_zeta = parse_double(value, where);
        else if (key == "gamma") cfg.heston_gamma = parse_double(value, where);
        else if (key == "mu") cfg.heston_mu = parse_double(value, where);
        else if (key == "r") cfg.heston_r = parse_double(value, where);
        else throw std::invalid_argument("config: unknown key " + where);
      } else {
        throw std::invalid_argument("config: unknown section [" + section + "]");
      }
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  return config_from_ini(load_ini(path));
}

DriftSpec ExperimentConfig::make_drift() const {
  return make_admissible_drift(drift, params, alpha);
}

std::string ExperimentConfig::metadata() const {
  std::ostringstream os;
  auto num = [](double v) { return CsvWriter::format(v); };
  os << "drift=" << to_string(drift) << " u=" << num(params.u) << " v=" << num(params.v)
     << " w=" << num(params.w) << " gamma=" << num(params.gamma);
  if (params.lambda > 0) os << " lambda=" << num(params.lambda) << " mu=" << num(params.mu);
  os << " sigma=" << num(sigma) << " x0=" << num(x0) << " hurst=" << num(hurst)
     << " alpha=" << num(alpha) << " method=" << method_to_string(method)
     << " T=" << num(horizon) << " n=" << steps << " reps=" << reps << " seed=" << seed;
  return os.str();
}

}  // namespace fsde
