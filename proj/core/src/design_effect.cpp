#include "survpower/design_effect.hpp"

#include <boost/random/beta_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <cmath>
#include <utility>
#include <vector>

#include "survpower/error.hpp"
#include "survpower/formulas.hpp"
#include "survpower/overlap.hpp"
#include "survpower/random.hpp"

namespace survpower {

using detail::fail;

std::string_view to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::kIpw: return "ipw";
    case WeightKind::kOverlap: return "overlap";
    case WeightKind::kTreated: return "treated";
    case WeightKind::kCustom: return "custom";
  }
  return "unknown";
}

WeightScheme::WeightScheme(WeightKind kind, Fn w1, Fn w0)
    : kind_(kind), w1_(std::move(w1)), w0_(std::move(w0)) {}

WeightScheme WeightScheme::ipw(double r) {
  detail::require_open_unit(r, "r");
  return {WeightKind::kIpw, [r](double e) { return r / e; },
          [r](double e) { return (1.0 - r) / (1.0 - e); }};
}

WeightScheme WeightScheme::overlap() {
  return {WeightKind::kOverlap, [](double e) { return 1.0 - e; }, [](double e) { return e; }};
}

WeightScheme WeightScheme::treated() {
  return {WeightKind::kTreated, [](double) { return 1.0; },
          [](double e) { return e / (1.0 - e); }};
}

WeightScheme WeightScheme::custom(Fn w1, Fn w0) {
  if (!w1 || !w0) fail(ErrorCode::kValidation, "custom weight functions must be set", "scheme");
  return {WeightKind::kCustom, std::move(w1), std::move(w0)};
}

WeightScheme WeightScheme::of_kind(WeightKind kind, double r) {
  switch (kind) {
    case WeightKind::kIpw: return ipw(r);
    case WeightKind::kOverlap: return overlap();
    case WeightKind::kTreated: return treated();
    case WeightKind::kCustom: break;
  }
  fail(ErrorCode::kValidation, "custom schemes need explicit weight functions", "scheme");
}

namespace {

struct ArmSums {
  double n[2] = {0.0, 0.0};
  double w[2] = {0.0, 0.0};
  double w2[2] = {0.0, 0.0};

  void add(int z, double weight) {
    n[z] += 1.0;
    w[z] += weight;
    w2[z] += weight * weight;
  }

  double design_effect() const {
    for (int z = 0; z < 2; ++z) {
      if (n[z] == 0.0 || !(w[z] > 0.0)) {
        fail(ErrorCode::kDegenerate, "both arms need units with positive total weight", "z");
      }
    }
    const double harmonic = 1.0 / (1.0 / n[1] + 1.0 / n[0]);
    return harmonic * (w2[1] / (w[1] * w[1]) + w2[0] / (w[0] * w[0]));
  }
};

}  // namespace

double kish_design_effect(std::span<const int> z, std::span<const double> w) {
  if (z.size() != w.size()) fail(ErrorCode::kValidation, "z and w differ in length", "w");
  ArmSums sums;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] != 0 && z[i] != 1) fail(ErrorCode::kValidation, "z must be 0 or 1", "z");
    if (!(w[i] >= 0.0) || !std::isfinite(w[i])) {
      fail(ErrorCode::kValidation, "weights must be finite and nonnegative", "w");
    }
    sums.add(z[i], w[i]);
  }
  return sums.design_effect();
}

KappaEstimate kappa_de_monte_carlo(double r, double phi, const WeightScheme& scheme,
                                   const KappaOptions& options) {
  if (options.n_draws < kMinKappaDraws) {
    fail(ErrorCode::kValidation, "n_draws must be at least 10000", "n_draws");
  }
  const BetaOverlap beta = solve_ab(r, phi);

  std::mt19937_64 engine(options.seed);
  boost::random::beta_distribution<double> draw_e(beta.a, beta.b);
  boost::random::uniform_01<double> draw_u;

  const std::int64_t per_batch = options.n_draws / kKappaBatches;
  ArmSums total;
  std::vector<double> batch_values;
  batch_values.reserve(kKappaBatches);

  for (int batch = 0; batch < kKappaBatches; ++batch) {
    // The last batch absorbs the remainder so exactly n_draws are used.
    const std::int64_t count =
        batch + 1 == kKappaBatches ? options.n_draws - per_batch * (kKappaBatches - 1) : per_batch;
    ArmSums sums;
    for (std::int64_t i = 0; i < count; ++i) {
      const double e = draw_e(engine);
      const int z = draw_u(engine) < e ? 1 : 0;
      double w = scheme.weight(z, e);
      if (options.weight_cap && w > *options.weight_cap) w = *options.weight_cap;
      sums.add(z, w);
      total.add(z, w);
    }
    batch_values.push_back(sums.design_effect());
  }

  double mean = 0.0;
  for (double v : batch_values) mean += v;
  mean /= kKappaBatches;
  double ss = 0.0;
  for (double v : batch_values) ss += (v - mean) * (v - mean);
  const double batch_sd = std::sqrt(ss / (kKappaBatches - 1));

  return {total.design_effect(), batch_sd / std::sqrt(static_cast<double>(kKappaBatches)),
          options.n_draws, options.seed};
}

namespace {

void require_finite_ipw_moments(double a, double b) {
  if (!(a > 1.0 && b > 1.0)) {
    fail(ErrorCode::kExistence, "IPW moments require a > 1 and b > 1", a > 1.0 ? "b" : "a");
  }
}

double risk_set_scale(double r, const LambdaPair& l, double d1, double d0) {
  return r * l.lambda0 * l.lambda0 * d1 + (1.0 - r) * l.lambda1 * l.lambda1 * d0;
}

}  // namespace

double kappa_ipw_analytic(double r, double a, double b) {
  detail::require_open_unit(r, "r");
  require_finite_ipw_moments(a, b);
  return r * (1.0 - r) * (a + b - 1.0) * (1.0 / (a - 1.0) + 1.0 / (b - 1.0));
}

double vif_analytic_ratio(double r, double tau0, double d1, double d0, double a, double b) {
  require_finite_ipw_moments(a, b);
  const LambdaPair l = lambda_pair(r, tau0);
  const double s = risk_set_scale(r, l, d1, d0);
  return (a + b - 1.0) / s *
         (r * r * l.lambda0 * l.lambda0 * d1 / (a - 1.0) +
          (1.0 - r) * (1.0 - r) * l.lambda1 * l.lambda1 * d0 / (b - 1.0));
}

double kappa_discrepancy(double r, double tau0, double d1, double d0, double a, double b) {
  require_finite_ipw_moments(a, b);
  const LambdaPair l = lambda_pair(r, tau0);
  const double s = risk_set_scale(r, l, d1, d0);
  return r * (1.0 - r) * (1.0 - 2.0 * r) * (a + b - 1.0) *
         (d0 * std::exp(tau0) - d1 * std::exp(-tau0)) / ((a - 1.0) * (b - 1.0) * s);
}

std::int64_t sample_size_with_vif(double n_rct_raw, double kappa) {
  if (!(kappa > 0.0)) fail(ErrorCode::kDomain, "kappa must be positive", "kappa");
  if (!(n_rct_raw >= 0.0)) fail(ErrorCode::kDomain, "n_rct must be nonnegative", "n_rct");
  return static_cast<std::int64_t>(std::ceil(kappa * n_rct_raw));
}

}  // namespace survpower
