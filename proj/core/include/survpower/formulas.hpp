#pragma once

// Closed-form asymptotic variances and sample sizes for the marginal hazard
// ratio. All functions are pure.
//
// Variances are reported on one of two scales: "units" means Var(tau_hat) ~ V/n
// with n the number of enrolled units, "events" means the same with n the
// number of observed events. The two differ by the combined event rate d.

#include <cstdint>

#include "survpower/normal.hpp"
#include "survpower/overlap.hpp"

namespace survpower {

enum class Scale { kUnits, kEvents };

struct VarianceValue {
  double value = 0.0;
  Scale scale = Scale::kUnits;

  /// Converts between scales; events-scale value = units-scale value * d.
  VarianceValue to_events(double d) const;
  VarianceValue to_units(double d) const;
};

/// Design-stage summary inputs shared by the variance and sample-size calls.
struct DesignInputs {
  double r = 0.5;       // treated proportion
  double tau0 = 0.0;    // postulated log marginal hazard ratio
  double d1 = 1.0;      // observed event rate, treated arm
  double d0 = 1.0;      // observed event rate, control arm
  double alpha = 0.05;  // significance level (one-sided unless sides == kTwo)
  double power = 0.8;
  Sides sides = Sides::kOne;

  /// Combined event rate d = r d1 + (1 - r) d0.
  double d() const { return r * d1 + (1.0 - r) * d0; }

  /// Throws Error(kDomain) naming the first violated invariant.
  void validate() const;
};

/// lambda1 = sqrt(r / (1 - r)) exp(tau0 / 2), lambda0 = 1 / lambda1.
struct LambdaPair {
  double lambda1 = 1.0;
  double lambda0 = 1.0;
};

LambdaPair lambda_pair(double r, double tau0);

/// Randomized-trial variance with arm-specific event rates (units scale).
VarianceValue v_rct(double r, double tau0, double d1, double d0);

/// v_rct with d1 = d0 = d.
VarianceValue v_rct_equal_censoring(double r, double tau0, double d);

/// Log-rank null variance 1 / [r (1 - r)] (events scale).
VarianceValue v_schoenfeld(double r);

/// Freedman's variance (events scale). Returns the tau0 -> 0 limit
/// v_schoenfeld(r) at tau0 == 0.
VarianceValue v_freedman(double r, double tau0);

/// Balanced-design ratios v_rct(events) / v_schoenfeld and v_rct / v_freedman.
double ratio_schoenfeld(double tau0);
double ratio_freedman(double tau0);

/// Observational IPW working variance under e ~ Beta(a, b) (units scale).
/// Throws kInfiniteVariance when a <= 1 or b <= 1; the message names the
/// smallest overlap coefficient that keeps the variance finite.
VarianceValue v_obs(double r, double tau0, double d1, double d0, const BetaOverlap& beta);

/// Hsieh-Lavori: Schoenfeld's variance inflated by 1 / (1 - R^2) with
/// R^2 = 1 / (a + b + 1) (events scale).
VarianceValue v_hsieh_lavori(double r, const BetaOverlap& beta);

/// (z_{1-alpha'} + z_power)^2 V / tau0^2 before rounding. V must be on the
/// units scale to yield units (or events scale to yield events).
double sample_size_raw(double variance, double tau0, double alpha, double power,
                       Sides sides = Sides::kOne);

/// ceil(sample_size_raw(...)) for a units-scale variance.
std::int64_t sample_size(const VarianceValue& v, double tau0, double alpha, double power,
                         Sides sides = Sides::kOne);

/// Units needed when an events-scale variance is converted with event rate d:
/// ceil(raw_events / d).
std::int64_t sample_size_units_from_events(const VarianceValue& v_events, double d,
                                           double tau0, double alpha, double power,
                                           Sides sides = Sides::kOne);

/// Power of the Wald test at n units: Phi(sqrt(n tau0^2 / V) - z_{1-alpha'}).
double power_at_n(double variance, double tau0, double alpha, double n,
                  Sides sides = Sides::kOne);

/// Minimal end-of-follow-up control survival gamma that guarantees the
/// randomized-trial variance is conservative under equal censoring.
struct ConservativenessThreshold {
  enum class Status {
    kValue,                  // gamma holds the threshold
    kNotApplicable,          // sign condition on (r, tau0) fails
    kTriviallyConservative,  // tau0 == 0: the risk-set ratio is constant
  };
  Status status = Status::kNotApplicable;
  double gamma = 0.0;
};

ConservativenessThreshold conservativeness_gamma(double r, double tau0);

}  // namespace survpower
