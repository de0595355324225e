#include "survpower/formulas.hpp"

#include <cmath>
#include <sstream>

#include "survpower/error.hpp"

namespace survpower {

using detail::fail;
using detail::require_open_unit;

namespace {

void require_event_rate(double d, const char* field) {
  if (!(d > 0.0 && d <= 1.0)) {
    fail(ErrorCode::kDomain, std::string(field) + " must lie in (0, 1]", field);
  }
}

void require_finite(double x, const char* field) {
  if (!std::isfinite(x)) fail(ErrorCode::kDomain, std::string(field) + " must be finite", field);
}

void require_nonzero_effect(double tau0) {
  require_finite(tau0, "tau0");
  if (tau0 == 0.0) {
    fail(ErrorCode::kDegenerate, "tau0 = 0 (hazard ratio 1) needs an infinite sample", "tau0");
  }
}

}  // namespace

VarianceValue VarianceValue::to_events(double d) const {
  require_event_rate(d, "d");
  if (scale == Scale::kEvents) return *this;
  return {value * d, Scale::kEvents};
}

VarianceValue VarianceValue::to_units(double d) const {
  require_event_rate(d, "d");
  if (scale == Scale::kUnits) return *this;
  return {value / d, Scale::kUnits};
}

void DesignInputs::validate() const {
  require_open_unit(r, "r");
  require_finite(tau0, "tau0");
  require_event_rate(d1, "d1");
  require_event_rate(d0, "d0");
  require_open_unit(alpha, "alpha");
  require_open_unit(power, "power");
  if (!(alpha < power)) fail(ErrorCode::kDomain, "alpha must be smaller than power", "power");
}

LambdaPair lambda_pair(double r, double tau0) {
  require_open_unit(r, "r");
  require_finite(tau0, "tau0");
  const double lambda1 = std::sqrt(r / (1.0 - r)) * std::exp(tau0 / 2.0);
  return {lambda1, 1.0 / lambda1};
}

VarianceValue v_rct(double r, double tau0, double d1, double d0) {
  require_event_rate(d1, "d1");
  require_event_rate(d0, "d0");
  const auto [l1, l0] = lambda_pair(r, tau0);
  const double d = r * d1 + (1.0 - r) * d0;
  const double sum = l1 + l0;
  return {sum * sum * (r * l0 * l0 * d1 + (1.0 - r) * l1 * l1 * d0) / (d * d), Scale::kUnits};
}

VarianceValue v_rct_equal_censoring(double r, double tau0, double d) {
  require_event_rate(d, "d");
  const auto [l1, l0] = lambda_pair(r, tau0);
  const double sum = l1 + l0;
  return {sum * sum * (r * l0 * l0 + (1.0 - r) * l1 * l1) / d, Scale::kUnits};
}

VarianceValue v_schoenfeld(double r) {
  require_open_unit(r, "r");
  return {1.0 / (r * (1.0 - r)), Scale::kEvents};
}

VarianceValue v_freedman(double r, double tau0) {
  require_open_unit(r, "r");
  require_finite(tau0, "tau0");
  const double schoenfeld = 1.0 / (r * (1.0 - r));
  if (tau0 == 0.0) return {schoenfeld, Scale::kEvents};
  // tau0 / (1 - e^tau0) = -tau0 / expm1(tau0) keeps precision near the null.
  const double factor = -tau0 * (1.0 - r + r * std::exp(tau0)) / std::expm1(tau0);
  return {schoenfeld * factor * factor, Scale::kEvents};
}

double ratio_schoenfeld(double tau0) {
  require_finite(tau0, "tau0");
  const double c = std::cosh(tau0);
  return c * (c + 1.0) / 2.0;
}

double ratio_freedman(double tau0) {
  require_finite(tau0, "tau0");
  if (tau0 == 0.0) return 1.0;
  // cosh - 1 = 2 sinh^2(tau0 / 2) avoids cancellation for small tau0.
  const double s = std::sinh(tau0 / 2.0);
  return 2.0 * std::cosh(tau0) * (2.0 * s * s) / (tau0 * tau0);
}

VarianceValue v_obs(double r, double tau0, double d1, double d0, const BetaOverlap& beta) {
  require_event_rate(d1, "d1");
  require_event_rate(d0, "d0");
  const double a = beta.a;
  const double b = beta.b;
  if (!(a > 1.0 && b > 1.0)) {
    std::ostringstream msg;
    msg << "IPW variance is infinite for Beta(" << a << ", " << b
        << "): need a > 1 and b > 1, i.e. phi >= " << min_phi_for_finite_variance(r)
        << " at r = " << r;
    fail(ErrorCode::kInfiniteVariance, msg.str(), "phi");
  }
  const auto [l1, l0] = lambda_pair(r, tau0);
  const double d = r * d1 + (1.0 - r) * d0;
  const double scale = (l1 + l0) / d;
  const double treated = r * r * l0 * l0 * d1 * (a + b - 1.0) / (a - 1.0);
  const double control = (1.0 - r) * (1.0 - r) * l1 * l1 * d0 * (a + b - 1.0) / (b - 1.0);
  return {scale * scale * (treated + control), Scale::kUnits};
}

VarianceValue v_hsieh_lavori(double r, const BetaOverlap& beta) {
  if (!(beta.a > 0.0 && beta.b > 0.0)) {
    fail(ErrorCode::kDomain, "Beta shapes must be positive", "phi");
  }
  return {v_schoenfeld(r).value * (1.0 + 1.0 / (beta.a + beta.b)), Scale::kEvents};
}

double sample_size_raw(double variance, double tau0, double alpha, double power, Sides sides) {
  require_nonzero_effect(tau0);
  require_open_unit(power, "power");
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    fail(ErrorCode::kDomain, "variance must be positive and finite", "variance");
  }
  const double z = critical_value(alpha, sides) + normal_quantile(power);
  return z * z * variance / (tau0 * tau0);
}

std::int64_t sample_size(const VarianceValue& v, double tau0, double alpha, double power,
                         Sides sides) {
  return static_cast<std::int64_t>(std::ceil(sample_size_raw(v.value, tau0, alpha, power, sides)));
}

std::int64_t sample_size_units_from_events(const VarianceValue& v_events, double d, double tau0,
                                           double alpha, double power, Sides sides) {
  require_event_rate(d, "d");
  const double events = sample_size_raw(v_events.value, tau0, alpha, power, sides);
  return static_cast<std::int64_t>(std::ceil(events / d));
}

double power_at_n(double variance, double tau0, double alpha, double n, Sides sides) {
  require_nonzero_effect(tau0);
  if (!(variance > 0.0)) fail(ErrorCode::kDomain, "variance must be positive", "variance");
  if (!(n >= 0.0)) fail(ErrorCode::kDomain, "n must be nonnegative", "n");
  return normal_cdf(std::sqrt(n * tau0 * tau0 / variance) - critical_value(alpha, sides));
}

ConservativenessThreshold conservativeness_gamma(double r, double tau0) {
  using Status = ConservativenessThreshold::Status;
  require_open_unit(r, "r");
  require_finite(tau0, "tau0");
  if (tau0 == 0.0) return {Status::kTriviallyConservative, 0.0};
  const bool applicable = r == 0.5 || (r < 0.5 && tau0 < 0.0) || (r > 0.5 && tau0 > 0.0);
  if (!applicable) return {Status::kNotApplicable, 0.0};
  const double base = (1.0 - r) / (r * std::exp(tau0));
  return {Status::kValue, std::pow(base, 2.0 / std::expm1(tau0))};
}

}  // namespace survpower
