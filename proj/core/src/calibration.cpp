#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "survpower/error.hpp"
#include "survpower/simulation.hpp"

namespace survpower {

namespace {

constexpr double kAlphaLow = -5.0;
constexpr double kAlphaHigh = 1.0;
constexpr double kAlphaTolerance = 1e-4;
constexpr double kCensorTolerance = 0.002;
constexpr double kPhiTolerance = 0.003;
constexpr int kMaxBisection = 200;

double expit(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double weibull_time(double e, double lp, double k, double s) {
  return s * std::pow(e * std::exp(-lp), 1.0 / k);
}

double mean_ps(const Superpopulation& pop, double c, double beta0) {
  double sum = 0.0;
  for (double lin : pop.ps_linear) sum += expit(beta0 + c * lin);
  return sum / static_cast<double>(pop.m);
}

double intercept_for_mean(const Superpopulation& pop, double c, double target_r) {
  double lo = -30.0;
  double hi = 30.0;
  for (int it = 0; it < kMaxBisection && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mean_ps(pop, c, mid) < target_r ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double overlap_at(const Superpopulation& pop, double c, double target_r, double* beta0_out) {
  const double beta0 = intercept_for_mean(pop, c, target_r);
  std::vector<double> ps(pop.ps_linear.size());
  std::vector<int> z(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    ps[i] = expit(beta0 + c * pop.ps_linear[i]);
    z[i] = pop.u_treat[i] < ps[i] ? 1 : 0;
  }
  if (beta0_out) *beta0_out = beta0;
  return empirical_overlap(ps, z);
}

// Share of arm units whose random censoring time falls before min(T*, t_dagger).
double censored_share(const Superpopulation& pop, int arm, double t_dagger, double nu) {
  if (nu <= 0.0) return 0.0;
  std::int64_t n = 0;
  std::int64_t censored = 0;
  for (std::int64_t i = 0; i < pop.m; ++i) {
    if (pop.z[i] != arm) continue;
    ++n;
    const double t_star = arm == 1 ? pop.t1[i] : pop.t0[i];
    if (pop.e_censor[i] / nu < std::min(t_star, t_dagger)) ++censored;
  }
  return n == 0 ? 0.0 : static_cast<double>(censored) / static_cast<double>(n);
}

}  // namespace

double calibrate_alpha(const Superpopulation& pop, double target_tau, WeightKind scheme) {
  if (!std::isfinite(target_tau))
    detail::fail(ErrorCode::kValidation, "target log hazard ratio must be finite", "tau0");
  if (pop.z.empty() || pop.t0.empty())
    detail::fail(ErrorCode::kValidation, "superpopulation not initialized", "pop");
  const auto m = static_cast<std::size_t>(pop.m);
  const std::vector<double> weights = true_weights(pop, scheme);
  std::vector<double> time(m);
  std::vector<int> event(m);

  auto fitted = [&](double alpha) {
    for (std::size_t i = 0; i < m; ++i) {
      const double t_star = pop.z[i] == 1
                                ? weibull_time(pop.e_event[i], alpha + pop.risk[i],
                                               pop.weibull_k, pop.weibull_s)
                                : pop.t0[i];
      event[i] = t_star <= pop.t_dagger ? 1 : 0;
      time[i] = std::min(t_star, pop.t_dagger);
    }
    CoxSample sample{time, event, pop.z, weights};
    return fit_weighted_cox(sample).tau_hat;
  };

  double lo = kAlphaLow;
  double hi = kAlphaHigh;
  double f_lo = fitted(lo) - target_tau;
  double f_hi = fitted(hi) - target_tau;
  if (f_lo > 0.0 || f_hi < 0.0)
    detail::fail(ErrorCode::kConvergence,
                 "target log hazard ratio not bracketed by alpha in [-5, 1]", "tau0");
  double best = std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
  double best_err = std::min(std::abs(f_lo), std::abs(f_hi));
  for (int it = 0; it < kMaxBisection; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = fitted(mid) - target_tau;
    if (std::abs(f_mid) < best_err) {
      best = mid;
      best_err = std::abs(f_mid);
    }
    // Stop well inside the tolerance so the returned alpha is not on its edge.
    if (best_err < 0.1 * kAlphaTolerance || hi - lo < 1e-12) break;
    (f_mid < 0.0 ? lo : hi) = mid;
  }
  if (best_err > kAlphaTolerance)
    detail::fail(ErrorCode::kConvergence,
                 "alpha calibration missed target by " + std::to_string(best_err), "tau0");
  return best;
}

double followup_time(const Superpopulation& pop, double control_survival_frac) {
  if (!(control_survival_frac > 0.0 && control_survival_frac < 1.0))
    detail::fail(ErrorCode::kValidation, "surviving fraction must lie in (0, 1)",
                 "control_survival_frac");
  std::vector<double> sorted = pop.t0;
  const auto m = static_cast<std::int64_t>(sorted.size());
  std::int64_t k = m - std::llround(control_survival_frac * static_cast<double>(m));
  k = std::clamp<std::int64_t>(k, 1, m);
  std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
  return sorted[static_cast<std::size_t>(k - 1)];
}

FollowupCalibration calibrate_followup_and_censoring(const Superpopulation& pop,
                                                     double control_survival_frac,
                                                     std::array<double, 2> censor_targets) {
  FollowupCalibration out;
  out.t_dagger = followup_time(pop, control_survival_frac);
  for (int arm = 0; arm < 2; ++arm) {
    const double target = censor_targets[arm];
    if (!(target >= 0.0 && target < 1.0))
      detail::fail(ErrorCode::kValidation, "censoring share must lie in [0, 1)",
                   "censor_rates");
    if (target == 0.0) continue;
    double lo = 0.0;
    double hi = 1.0;
    int grow = 0;
    while (censored_share(pop, arm, out.t_dagger, hi) < target) {
      lo = hi;
      hi *= 2.0;
      if (++grow > 200)
        detail::fail(ErrorCode::kConvergence, "censoring share not reachable", "censor_rates");
    }
    double nu = hi;
    double share = censored_share(pop, arm, out.t_dagger, hi);
    for (int it = 0; it < kMaxBisection && std::abs(share - target) > 0.25 * kCensorTolerance;
         ++it) {
      nu = 0.5 * (lo + hi);
      share = censored_share(pop, arm, out.t_dagger, nu);
      (share < target ? lo : hi) = nu;
    }
    if (std::abs(share - target) > kCensorTolerance)
      detail::fail(ErrorCode::kConvergence, "censoring calibration did not converge",
                   "censor_rates");
    out.nu[arm] = nu;
    out.realized_share[arm] = share;
  }
  return out;
}

OverlapCalibration calibrate_overlap(const Superpopulation& pop, double target_r,
                                     double target_phi) {
  detail::require_open_unit(target_r, "r");
  if (!(target_phi > 0.0 && target_phi <= 1.0))
    detail::fail(ErrorCode::kValidation, "phi must lie in (0, 1]", "phi");
  OverlapCalibration out;
  if (target_phi >= 1.0) {
    out.c = 0.0;
    out.beta0 = std::log(target_r / (1.0 - target_r));
    out.empirical_phi = overlap_at(pop, 0.0, target_r, nullptr);
    out.mean_ps = target_r;
    return out;
  }

  // Overlap falls as the propensity slope grows.
  double lo = 0.0;
  double hi = 1.0;
  int grow = 0;
  while (overlap_at(pop, hi, target_r, nullptr) > target_phi) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 12)
      detail::fail(ErrorCode::kConvergence, "overlap target below reachable range", "phi");
  }
  double best_c = hi;
  double best_beta0 = 0.0;
  double best_phi = overlap_at(pop, hi, target_r, &best_beta0);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    double beta0 = 0.0;
    const double phi = overlap_at(pop, mid, target_r, &beta0);
    if (std::abs(phi - target_phi) < std::abs(best_phi - target_phi)) {
      best_c = mid;
      best_beta0 = beta0;
      best_phi = phi;
    }
    if (std::abs(best_phi - target_phi) < 0.1 * kPhiTolerance || hi - lo < 1e-10) break;
    (phi > target_phi ? lo : hi) = mid;
  }
  if (std::abs(best_phi - target_phi) > kPhiTolerance)
    detail::fail(ErrorCode::kConvergence,
                 "overlap calibration missed target by " +
                     std::to_string(std::abs(best_phi - target_phi)),
                 "phi");
  out.c = best_c;
  out.beta0 = best_beta0;
  out.empirical_phi = best_phi;
  out.mean_ps = mean_ps(pop, best_c, best_beta0);
  return out;
}

}  // namespace survpower
