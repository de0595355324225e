#include <algorithm>
#include <chrono>
#include <cmath>

#include "survpower/error.hpp"
#include "survpower/random.hpp"
#include "survpower/simulation.hpp"

namespace survpower {

namespace {

struct Replicate {
  std::vector<std::size_t> rows;
  std::vector<double> time;
  std::vector<int> event;
  std::vector<int> z;
  std::vector<double> weight;
  std::vector<double> x;

  void load(const Superpopulation& pop) {
    const std::size_t n = rows.size();
    time.resize(n);
    event.resize(n);
    z.resize(n);
    weight.assign(n, 1.0);
    x.resize(n * kCovariates);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = rows[i];
      time[i] = pop.time[j];
      event[i] = pop.event[j];
      z[i] = pop.z[j];
      for (int k = 0; k < kCovariates; ++k) x[i * kCovariates + k] = pop.x[j * kCovariates + k];
    }
  }
};

double sample_sd(const std::vector<double>& v, double* mean_out) {
  double mean = 0.0;
  for (double t : v) mean += t;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double t : v) ss += (t - mean) * (t - mean);
  if (mean_out) *mean_out = mean;
  return v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
}

}  // namespace

PowerEstimate empirical_power(const Superpopulation& pop, std::int64_t n, std::int64_t b,
                              const AnalysisSpec& spec) {
  if (n < 4) detail::fail(ErrorCode::kValidation, "n must be at least 4", "n");
  if (b < 2) detail::fail(ErrorCode::kValidation, "at least two replicates are needed", "B");
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
    detail::fail(ErrorCode::kValidation, "alpha must lie in (0, 1)", "alpha");
  if (pop.time.empty())
    detail::fail(ErrorCode::kValidation, "superpopulation has no observed data", "pop");

  std::vector<std::size_t> treated;
  std::vector<std::size_t> control;
  for (std::int64_t i = 0; i < pop.m; ++i)
    (pop.z[i] == 1 ? treated : control).push_back(static_cast<std::size_t>(i));
  if (treated.empty() || control.empty())
    detail::fail(ErrorCode::kDegenerate, "superpopulation has an empty arm", "z");

  const bool randomized = spec.design == AnalysisDesign::kRandomized;
  const double share = spec.treated_fraction.value_or(pop.treated_share());
  std::int64_t n1 = std::llround(static_cast<double>(n) * share);
  n1 = std::clamp<std::int64_t>(n1, 1, n - 1);

  PowerEstimate out;
  out.n_used = n;
  out.b_requested = b;
  out.tau_hats.reserve(static_cast<std::size_t>(b));
  out.robust_ses.reserve(static_cast<std::size_t>(b));

  const auto start = std::chrono::steady_clock::now();
  Replicate rep;
  rep.rows.resize(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < b; ++k) {
    if (spec.budget_seconds) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      if (elapsed.count() > *spec.budget_seconds) {
        out.budget_exhausted = true;
        break;
      }
    }
    Rng rng = Rng::stream(spec.seed, static_cast<std::uint64_t>(k));
    if (randomized) {
      for (std::int64_t i = 0; i < n1; ++i) rep.rows[i] = treated[rng.index(treated.size())];
      for (std::int64_t i = n1; i < n; ++i) rep.rows[i] = control[rng.index(control.size())];
    } else {
      for (auto& row : rep.rows) row = rng.index(static_cast<std::uint64_t>(pop.m));
    }
    rep.load(pop);

    try {
      if (!randomized) {
        const LogisticFit ps = fit_logistic(rep.x, kCovariates, rep.z);
        double r_hat = 0.0;
        for (int zi : rep.z) r_hat += zi;
        r_hat /= static_cast<double>(n);
        const WeightScheme scheme = WeightScheme::of_kind(spec.scheme, r_hat);
        for (std::size_t i = 0; i < rep.weight.size(); ++i)
          rep.weight[i] = scheme.weight(rep.z[i], ps.fitted[i]);
      }
      const CoxFit fit = fit_weighted_cox(CoxSample{rep.time, rep.event, rep.z, rep.weight});
      out.tau_hats.push_back(fit.tau_hat);
      out.robust_ses.push_back(fit.robust_se);
    } catch (const Error&) {
      ++out.failed_replicates;
    }
  }

  out.b_replicates = static_cast<std::int64_t>(out.tau_hats.size());
  if (out.b_replicates < 2) {
    detail::fail(ErrorCode::kDegenerate, "fewer than two usable replicates", "B");
  }
  out.empirical_sd = sample_sd(out.tau_hats, &out.mean_tau_hat);
  for (std::size_t i = 0; i < out.tau_hats.size(); ++i) {
    const double se =
        spec.mode == RejectionMode::kEmpiricalVariance ? out.empirical_sd : out.robust_ses[i];
    if (!(se > 0.0)) continue;
    if (wald_test(out.tau_hats[i], se, spec.null_tau, spec.alpha, spec.alternative).reject)
      ++out.rejections;
  }
  out.power = static_cast<double>(out.rejections) / static_cast<double>(out.b_replicates);
  out.mc_half_width =
      1.96 * std::sqrt(out.power * (1.0 - out.power) / static_cast<double>(out.b_replicates));
  return out;
}

}  // namespace survpower
