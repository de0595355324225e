#pragma once

// Bounds on the confounding residual of the observational IPW variance and
// the resulting sensitivity range of the required sample size.
//
// rho_z bounds |cor(F_z(t | X), w_z)| over follow-up in arm z. gamma is the
// control survival at the end of follow-up; when supplied, three tighter
// bounds M2..M4 become available and the reported bound is min(M1..M4).

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "survpower/formulas.hpp"
#include "survpower/overlap.hpp"

namespace survpower {

struct SensitivityInputs {
  double rho1 = 0.5;
  double rho0 = 0.5;
  std::optional<double> gamma;

  void validate() const;
};

struct EpsilonBound {
  double m1 = 0.0;
  std::optional<double> m2;
  std::optional<double> m3;
  std::optional<double> m4;
  double bound = 0.0;

  double variance = 0.0;  // working variance v_obs (units)
  std::int64_t n = 0;
  std::int64_t n_low = 0;   // at variance - bound
  std::int64_t n_high = 0;  // at variance + bound
  bool n_low_clamped = false;  // variance - bound <= 0; n_low reported as 1
};

/// Requires a > 2 and b > 2 so that the weight variances exist.
EpsilonBound epsilon_bound(const DesignInputs& design, const BetaOverlap& beta,
                           const SensitivityInputs& sens);

/// M1 along a sequence of overlap coefficients at design.r.
std::vector<double> epsilon_vanishes_check(const DesignInputs& design,
                                           const SensitivityInputs& sens,
                                           std::span<const double> phis);

}  // namespace survpower
