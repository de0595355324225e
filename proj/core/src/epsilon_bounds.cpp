#include "survpower/epsilon_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "survpower/error.hpp"

namespace survpower {

using detail::fail;

void SensitivityInputs::validate() const {
  if (!(rho1 >= 0.0 && rho1 <= 1.0)) fail(ErrorCode::kDomain, "rho1 must lie in [0, 1]", "rho1");
  if (!(rho0 >= 0.0 && rho0 <= 1.0)) fail(ErrorCode::kDomain, "rho0 must lie in [0, 1]", "rho0");
  if (gamma && !(*gamma > 0.0 && *gamma < 1.0)) {
    fail(ErrorCode::kDomain, "gamma must lie in (0, 1)", "gamma");
  }
}

namespace {

struct BoundTerms {
  double m1 = 0.0;
  std::optional<double> m2, m3, m4;
};

BoundTerms compute_terms(const DesignInputs& design, const BetaOverlap& beta,
                         const SensitivityInputs& sens) {
  const BetaMoments moments(beta);
  const double sd_w1 = std::sqrt(moments.var_w1());
  const double sd_w0 = std::sqrt(moments.var_w0());

  const double r = design.r;
  const double tau0 = design.tau0;
  const double d = design.d();
  const auto [l1, l0] = lambda_pair(r, tau0);
  const double lead = (l1 + l0) * (l1 + l0);

  // Per-arm factors; M2 scales the treated arm by exp(tau0), M3 and M4 by
  // exp(tau0 / 2).
  const double treated = sens.rho1 * r * l0 * l0 * sd_w1;
  const double control = sens.rho0 * (1.0 - r) * l1 * l1 * sd_w0;

  BoundTerms t;
  t.m1 = std::numbers::pi * lead / (2.0 * d * d) * (treated + control);
  if (sens.gamma) {
    const double log_gamma = std::log(*sens.gamma);
    const double root = std::sqrt(-log_gamma);
    const double half = std::exp(tau0 / 2.0);
    t.m2 = -lead * log_gamma / (2.0 * d * d) * (treated * std::exp(tau0) + control);
    t.m3 = lead * root / std::sqrt(d * d * d) * (treated * half + control);
    t.m4 = lead * root / (std::numbers::sqrt2 * d * d) * (treated * half + control);
  }
  return t;
}

void require_weight_variances(const BetaOverlap& beta) {
  if (!(beta.a > 2.0 && beta.b > 2.0)) {
    fail(ErrorCode::kExistence,
         "epsilon bounds need finite weight variances (a > 2 and b > 2); increase phi", "phi");
  }
}

}  // namespace

EpsilonBound epsilon_bound(const DesignInputs& design, const BetaOverlap& beta,
                           const SensitivityInputs& sens) {
  design.validate();
  sens.validate();
  require_weight_variances(beta);

  const BoundTerms t = compute_terms(design, beta, sens);
  EpsilonBound out;
  out.m1 = t.m1;
  out.m2 = t.m2;
  out.m3 = t.m3;
  out.m4 = t.m4;
  out.bound = t.m1;
  if (sens.gamma) out.bound = std::min({t.m1, *t.m2, *t.m3, *t.m4});

  const VarianceValue v = v_obs(design.r, design.tau0, design.d1, design.d0, beta);
  out.variance = v.value;
  out.n = sample_size(v, design.tau0, design.alpha, design.power, design.sides);
  out.n_high = sample_size({v.value + out.bound, Scale::kUnits}, design.tau0, design.alpha,
                           design.power, design.sides);
  const double low = v.value - out.bound;
  if (low > 0.0) {
    out.n_low = sample_size({low, Scale::kUnits}, design.tau0, design.alpha, design.power,
                            design.sides);
  } else {
    out.n_low = 1;
    out.n_low_clamped = true;
  }
  return out;
}

std::vector<double> epsilon_vanishes_check(const DesignInputs& design,
                                           const SensitivityInputs& sens,
                                           std::span<const double> phis) {
  design.validate();
  sens.validate();
  std::vector<double> m1;
  m1.reserve(phis.size());
  for (double phi : phis) {
    const BetaOverlap beta = solve_ab(design.r, phi);
    require_weight_variances(beta);
    m1.push_back(compute_terms(design, beta, sens).m1);
  }
  return m1;
}

}  // namespace survpower
