#pragma once

#include <string>
#include <vector>

#include "fsde/common.hpp"

namespace fsde {

enum class DriftFamily { b1, b2, b1_plus_sin, b2_plus_sin, b1_plus_log, b2_plus_log };

DriftFamily drift_family_from_string(const std::string& name);
std::string to_string(DriftFamily family);

struct DriftParams {
  double u = 1;
  double v = 1;
  double w = 1;
  double gamma = 1;
  // perturbation amplitude/frequency, used by the *_plus_* families only
  double lambda = 0;
  double mu = 0;
};

struct AdmissibilityReport {
  bool admissible = false;
  double contraction_K = 0;
  double growth_R = 0;
  std::vector<std::string> reasons;  // failed conditions; empty when admissible
};

// A drift family of the singular equation dX = b(X)dt + sigma dB:
//   b1(x) = u(v x^{-gamma} - w x)
//   b2(x) = u/(e^{v x^gamma} - 1) - w x
// optionally perturbed by lambda*sin(mu*x) or -lambda*log(mu*x).
// The certified constants: bdot(x) < -K and b(x) > -R x for all x > 0, with
//   b1: K = R = uw      b2: K = R = w
//   sin: K -= lambda*mu, R += lambda*mu
//   log: K unchanged,    R += lambda*mu/e
// The sin perturbation is only contracting when lambda*mu < base K; a spec
// that violates it still constructs but is rejected by check_admissibility.
class DriftSpec {
 public:
  DriftSpec(DriftFamily family, DriftParams params);

  double b(double x) const;
  double b_dot(double x) const;

  double contraction_K() const { return contraction_K_; }
  double growth_R() const { return growth_R_; }
  // unique root x_b > 0 of b; requires a contracting spec
  double root() const;

  DriftFamily family() const { return family_; }
  const DriftParams& params() const { return params_; }

 private:
  DriftFamily family_;
  DriftParams params_;
  double contraction_K_ = 0;
  double growth_R_ = 0;
  double root_ = 0;
};

double eval_b(const DriftSpec& spec, double x);
double eval_b_dot(const DriftSpec& spec, double x);

// Certifies the analytic admissibility conditions at the working Holder
// exponent alpha: b1-based families need 1 - alpha < alpha*gamma, b2-based
// need alpha*gamma >= 1, sin-perturbed additionally need lambda*mu below the
// base contraction constant. Always returns a report.
AdmissibilityReport check_admissibility(const DriftSpec& spec, double alpha);

double drift_root(const DriftSpec& spec);

// Construct and require admissibility; throws std::invalid_argument listing
// the failed conditions otherwise.
DriftSpec make_admissible_drift(DriftFamily family, DriftParams params, double alpha);

}  // namespace fsde
