#include "fsde/drift.hpp"

#include <cmath>
#include <numbers>

namespace fsde {

namespace {

constexpr double kMinX = 1e-300;  // below this, x^{-gamma} terms overflow silently

bool is_b1_based(DriftFamily f) {
  return f == DriftFamily::b1 || f == DriftFamily::b1_plus_sin ||
         f == DriftFamily::b1_plus_log;
}

bool has_sin(DriftFamily f) {
  return f == DriftFamily::b1_plus_sin || f == DriftFamily::b2_plus_sin;
}

bool has_log(DriftFamily f) {
  return f == DriftFamily::b1_plus_log || f == DriftFamily::b2_plus_log;
}

void require_positive(double x, const char* name) {
  if (!(x > 0)) throw std::invalid_argument(std::string("DriftSpec: ") + name + " must be positive");
}

}  // namespace

DriftFamily drift_family_from_string(const std::string& name) {
  if (name == "b1") return DriftFamily::b1;
  if (name == "b2") return DriftFamily::b2;
  if (name == "b1_plus_sin") return DriftFamily::b1_plus_sin;
  if (name == "b2_plus_sin") return DriftFamily::b2_plus_sin;
  if (name == "b1_plus_log") return DriftFamily::b1_plus_log;
  if (name == "b2_plus_log") return DriftFamily::b2_plus_log;
  throw std::invalid_argument("unknown drift family: " + name);
}

std::string to_string(DriftFamily family) {
  switch (family) {
    case DriftFamily::b1: return "b1";
    case DriftFamily::b2: return "b2";
    case DriftFamily::b1_plus_sin: return "b1_plus_sin";
    case DriftFamily::b2_plus_sin: return "b2_plus_sin";
    case DriftFamily::b1_plus_log: return "b1_plus_log";
    case DriftFamily::b2_plus_log: return "b2_plus_log";
  }
  throw std::invalid_argument("unknown drift family");
}

DriftSpec::DriftSpec(DriftFamily family, DriftParams params)
    : family_(family), params_(params) {
  require_positive(params.u, "u");
  require_positive(params.v, "v");
  require_positive(params.w, "w");
  require_positive(params.gamma, "gamma");
  const bool perturbed = has_sin(family) || has_log(family);
  if (perturbed) {
    require_positive(params.lambda, "lambda");
    require_positive(params.mu, "mu");
  }

  const double base_K = is_b1_based(family) ? params.u * params.w : params.w;
  contraction_K_ = base_K;
  growth_R_ = base_K;
  if (has_sin(family)) {
    contraction_K_ -= params.lambda * params.mu;
    growth_R_ += params.lambda * params.mu;
  } else if (has_log(family)) {
    growth_R_ += params.lambda * params.mu / std::numbers::e;
  }

  if (contraction_K_ > 0) {
    // b is strictly decreasing from +inf to -inf: bracket then bisect
    double lo = 1.0, hi = 1.0;
    int guard = 0;
    while (b(lo) <= 0) {
      lo /= 2;
      if (++guard > 200) throw numerical_error("drift root: bracketing failed (low)");
    }
    guard = 0;
    while (b(hi) >= 0) {
      hi *= 2;
      if (++guard > 200) throw numerical_error("drift root: bracketing failed (high)");
    }
    for (int i = 0; i < 200 && (hi - lo) > 1e-16 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (b(mid) > 0 ? lo : hi) = mid;
    }
    root_ = 0.5 * (lo + hi);
  } else {
    root_ = std::nan("");
  }
}

double DriftSpec::b(double x) const {
  if (!(x > 0)) throw std::domain_error("drift: x must be positive");
  if (x < kMinX) throw std::domain_error("drift: x below 1e-300");
  double value;
  if (is_b1_based(family_)) {
    value = params_.u * (params_.v * std::pow(x, -params_.gamma) - params_.w * x);
  } else {
    const double s = params_.v * std::pow(x, params_.gamma);
    value = (s > 700 ? 0.0 : params_.u / std::expm1(s)) - params_.w * x;
  }
  if (has_sin(family_)) value += params_.lambda * std::sin(params_.mu * x);
  if (has_log(family_)) value -= params_.lambda * std::log(params_.mu * x);
  return value;
}

double DriftSpec::b_dot(double x) const {
  if (!(x > 0)) throw std::domain_error("drift: x must be positive");
  if (x < kMinX) throw std::domain_error("drift: x below 1e-300");
  double value;
  if (is_b1_based(family_)) {
    value = -params_.u *
            (params_.v * params_.gamma * std::pow(x, -params_.gamma - 1.0) + params_.w);
  } else {
    const double s = params_.v * std::pow(x, params_.gamma);
    double singular = 0.0;
    if (s <= 700) {
      const double em = std::expm1(s);
      singular = params_.u * params_.v * params_.gamma *
                 std::pow(x, params_.gamma - 1.0) * std::exp(s) / (em * em);
    }
    value = -singular - params_.w;
  }
  if (has_sin(family_)) value += params_.lambda * params_.mu * std::cos(params_.mu * x);
  if (has_log(family_)) value -= params_.lambda / x;
  return value;
}

double DriftSpec::root() const {
  if (!(contraction_K_ > 0))
    throw std::invalid_argument("DriftSpec::root: spec is not contracting");
  return root_;
}

double eval_b(const DriftSpec& spec, double x) { return spec.b(x); }
double eval_b_dot(const DriftSpec& spec, double x) { return spec.b_dot(x); }

AdmissibilityReport check_admissibility(const DriftSpec& spec, double alpha) {
  AdmissibilityReport report;
  report.contraction_K = spec.contraction_K();
  report.growth_R = spec.growth_R();
  const auto& p = spec.params();
  if (!(alpha > 0 && alpha < 1)) {
    report.reasons.push_back("alpha outside (0,1)");
    return report;
  }
  if (is_b1_based(spec.family())) {
    if (!(1.0 - alpha < alpha * p.gamma))
      report.reasons.push_back("b1 family needs 1 - alpha < alpha*gamma");
  } else {
    if (!(alpha * p.gamma >= 1.0))
      report.reasons.push_back("b2 family needs alpha*gamma >= 1");
  }
  if (has_sin(spec.family())) {
    const double base_K = is_b1_based(spec.family()) ? p.u * p.w : p.w;
    if (!(p.lambda * p.mu < base_K))
      report.reasons.push_back(is_b1_based(spec.family())
                                   ? "sin perturbation needs lambda*mu < u*w"
                                   : "sin perturbation needs lambda*mu < w");
  }
  report.admissible = report.reasons.empty();
  return report;
}

double drift_root(const DriftSpec& spec) { return spec.root(); }

DriftSpec make_admissible_drift(DriftFamily family, DriftParams params, double alpha) {
  DriftSpec spec(family, params);
  const auto report = check_admissibility(spec, alpha);
  if (!report.admissible) {
    std::string msg = "drift not admissible:";
    for (const auto& r : report.reasons) msg += " " + r + ";";
    throw std::invalid_argument(msg);
  }
  return spec;
}

}  // namespace fsde
