#pragma once

// Synthetic-data harness that checks the sample-size formulas empirically.
//
// A superpopulation of m units carries six covariates (three equicorrelated
// standard normals with pairwise correlation 0.5, three Bernoulli(0.5)), a
// logistic propensity score expit(beta0 + c X beta), treatment
// Z ~ Bernoulli(e), Weibull proportional-hazards potential times
//   T(z) = s (E / exp(alpha z + X theta))^{1/k},  E ~ Exp(1),
// arm-specific exponential censoring and administrative censoring at t_dagger.
// All randomness is drawn once per unit (common random numbers), so the
// calibration targets are smooth functions of (c, beta0, alpha, nu).

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "survpower/design_effect.hpp"
#include "survpower/overlap.hpp"
#include "survpower/survival.hpp"

namespace survpower {

inline constexpr int kCovariates = 6;
inline constexpr int kHistogramBins = 200;

struct SimConfig {
  std::int64_t m = 100'000;
  std::array<double, kCovariates> beta_ps{0.2, 0.3, -0.3, -0.2, -0.3, 0.2};
  double c = 0.0;
  double beta0 = 0.0;
  std::array<double, kCovariates> theta{-0.4, -0.2, 0.1, 0.1, 0.2, -0.3};
  double weibull_k = 1.2;
  double weibull_s = 3.0;
  double alpha_trt = 0.0;
  double target_hr = 0.6;
  double target_r = 0.5;
  double target_phi = 1.0;                       // 1 means randomized (c = 0)
  std::array<double, 2> censor_rates{0.0, 0.0};  // random-censoring share, {control, treated}
  double t_dagger = std::numeric_limits<double>::infinity();
  std::array<double, 2> nu{0.0, 0.0};  // exponential censoring rates, {control, treated}
  std::uint64_t seed = 20240601;

  void validate() const;
};

struct Superpopulation {
  std::int64_t m = 0;
  double weibull_k = 1.2;
  double weibull_s = 3.0;

  // Base randomness, fixed at generation.
  std::vector<double> x;          // m x 6, row-major
  std::vector<double> ps_linear;  // X beta
  std::vector<double> risk;       // X theta
  std::vector<double> u_treat;    // uniform for Z
  std::vector<double> e_event;    // Exp(1) for potential times
  std::vector<double> e_censor;   // Exp(1) for random censoring

  // Derived state.
  double c = 0.0;
  double beta0 = 0.0;
  double alpha_trt = 0.0;
  double t_dagger = std::numeric_limits<double>::infinity();
  std::array<double, 2> nu{0.0, 0.0};
  std::vector<double> ps;
  std::vector<int> z;
  std::vector<double> t0, t1;  // potential event times
  std::vector<double> time;    // observed min(T*, C, t_dagger)
  std::vector<int> event;

  double treated_share() const;
  /// Unweighted share of arm-z units with an observed event.
  double event_rate(int arm) const;
};

Superpopulation generate_superpopulation(const SimConfig& config);

/// Recomputes ps and z for new (c, beta0).
void assign_treatment(Superpopulation& pop, double c, double beta0);
/// Recomputes the potential times for a new treatment log-effect.
void set_treatment_effect(Superpopulation& pop, double alpha_trt);
/// Recomputes observed (time, event) for new censoring parameters.
void apply_censoring(Superpopulation& pop, double t_dagger, std::array<double, 2> nu);

/// Bhattacharyya coefficient between the 200-bin histograms on (0, 1) of the
/// propensity scores of treated and control units.
double empirical_overlap(std::span<const double> ps, std::span<const int> z);

/// Weights implied by the true propensity scores.
std::vector<double> true_weights(const Superpopulation& pop, WeightKind scheme);

/// Bisection over alpha in [-5, 1] so that the weighted Cox fit on the
/// superpopulation (administrative censoring only) returns target_tau within 1e-4.
double calibrate_alpha(const Superpopulation& pop, double target_tau, WeightKind scheme);

struct FollowupCalibration {
  double t_dagger = 0.0;
  std::array<double, 2> nu{0.0, 0.0};
  std::array<double, 2> realized_share{0.0, 0.0};
};

/// Follow-up time leaving `control_survival_frac` of the control potential
/// times beyond it.
double followup_time(const Superpopulation& pop, double control_survival_frac = 0.2);

/// t_dagger from followup_time, then nu_z by bisection so that the share of
/// arm-z units censored at random before min(T*, t_dagger) hits the target
/// within 0.002. Does not modify pop.
FollowupCalibration calibrate_followup_and_censoring(const Superpopulation& pop,
                                                     double control_survival_frac,
                                                     std::array<double, 2> censor_targets);

struct OverlapCalibration {
  double c = 0.0;
  double beta0 = 0.0;
  double empirical_phi = 1.0;
  double mean_ps = 0.5;
};

/// Nested root-find: beta0 so that mean ps = target_r, c so that the
/// histogram overlap equals target_phi within 0.003.
OverlapCalibration calibrate_overlap(const Superpopulation& pop, double target_r,
                                     double target_phi);

enum class AnalysisDesign { kRandomized, kObservational };
enum class RejectionMode {
  kEmpiricalVariance,  // statistic tau_hat / sd(tau_hat over replicates)
  kRobustSe,           // statistic tau_hat / robust_se per replicate
};

struct AnalysisSpec {
  AnalysisDesign design = AnalysisDesign::kRandomized;
  WeightKind scheme = WeightKind::kIpw;
  double alpha = 0.05;
  Alternative alternative = Alternative::kLess;
  double null_tau = 0.0;
  RejectionMode mode = RejectionMode::kEmpiricalVariance;
  std::uint64_t seed = 20240601;
  std::optional<double> treated_fraction;  // stratification share; defaults to the population's
  std::optional<double> budget_seconds;
};

struct PowerEstimate {
  std::int64_t n_used = 0;
  std::int64_t b_requested = 0;
  std::int64_t b_replicates = 0;  // replicates with a usable fit
  std::int64_t failed_replicates = 0;
  std::int64_t rejections = 0;
  double power = 0.0;
  double mc_half_width = 0.0;
  double mean_tau_hat = 0.0;
  double empirical_sd = 0.0;
  bool budget_exhausted = false;
  std::vector<double> tau_hats;
  std::vector<double> robust_ses;
};

/// b replicates of size n drawn with replacement (stratified by Z when
/// randomized); observational replicates refit a logistic propensity model
/// on the six covariates. Replicate k uses Rng::stream(spec.seed, k).
PowerEstimate empirical_power(const Superpopulation& pop, std::int64_t n, std::int64_t b,
                              const AnalysisSpec& spec);

enum class SampleSizeMethod { kProposed, kSchoenfeld, kFreedman, kHsiehLavori };

std::string_view to_string(SampleSizeMethod method);

struct ScenarioSpec {
  SimConfig config;
  WeightKind scheme = WeightKind::kIpw;
  SampleSizeMethod method = SampleSizeMethod::kProposed;
  double alpha = 0.05;
  double power = 0.8;
  std::int64_t b = 1000;
  RejectionMode mode = RejectionMode::kEmpiricalVariance;
  std::optional<std::int64_t> n_override;
  std::optional<double> budget_seconds;
  std::int64_t kappa_draws = kDefaultKappaDraws;
  double control_survival_frac = 0.2;

  bool randomized() const { return config.target_phi >= 1.0; }
};

struct ScenarioResult {
  OverlapCalibration overlap;
  double alpha_trt = 0.0;
  FollowupCalibration followup;
  double d1 = 0.0;
  double d0 = 0.0;
  double d = 0.0;
  std::optional<BetaOverlap> beta;
  std::optional<KappaEstimate> kappa;
  double variance = 0.0;  // units scale (events scale / d for log-rank comparators)
  double n_raw = 0.0;
  std::int64_t n = 0;
  PowerEstimate power;
};

/// Full pipeline: generate, calibrate overlap, follow-up, treatment effect and
/// censoring; compute N from the chosen formula using the superpopulation
/// event rates; estimate power.
ScenarioResult run_scenario(const ScenarioSpec& spec);

}  // namespace survpower
