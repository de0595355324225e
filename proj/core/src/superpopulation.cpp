#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "survpower/error.hpp"
#include "survpower/random.hpp"
#include "survpower/simulation.hpp"

namespace survpower {

namespace {

constexpr int kContinuous = 3;
constexpr double kCovariateCorrelation = 0.5;

double expit(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Eigen::Matrix3d continuous_factor() {
  Eigen::Matrix3d cov = Eigen::Matrix3d::Constant(kCovariateCorrelation);
  cov.diagonal().setOnes();
  return cov.llt().matrixL();
}

// Potential time with cumulative hazard (t / s)^k exp(lp).
double weibull_time(double e, double lp, double k, double s) {
  return s * std::pow(e * std::exp(-lp), 1.0 / k);
}

}  // namespace

void SimConfig::validate() const {
  using detail::fail;
  if (m < 10'000) fail(ErrorCode::kValidation, "m must be at least 10000", "m");
  detail::require_open_unit(target_r, "r");
  if (!(target_phi > 0.0 && target_phi <= 1.0))
    fail(ErrorCode::kValidation, "phi must lie in (0, 1]", "phi");
  if (!(target_hr > 0.0) || !std::isfinite(target_hr))
    fail(ErrorCode::kValidation, "hazard ratio must be positive", "hr");
  for (double share : censor_rates)
    if (!(share >= 0.0 && share < 1.0))
      fail(ErrorCode::kValidation, "censoring share must lie in [0, 1)", "censor_rates");
  if (!(weibull_k > 0.0) || !(weibull_s > 0.0))
    fail(ErrorCode::kValidation, "Weibull shape and scale must be positive", "weibull");
}

double Superpopulation::treated_share() const {
  if (m == 0) return 0.0;
  std::int64_t n1 = std::count(z.begin(), z.end(), 1);
  return static_cast<double>(n1) / static_cast<double>(m);
}

double Superpopulation::event_rate(int arm) const {
  std::int64_t n = 0;
  std::int64_t events = 0;
  for (std::int64_t i = 0; i < m; ++i) {
    if (z[i] != arm) continue;
    ++n;
    events += event[i];
  }
  if (n == 0) detail::fail(ErrorCode::kDegenerate, "empty arm in superpopulation", "z");
  return static_cast<double>(events) / static_cast<double>(n);
}

Superpopulation generate_superpopulation(const SimConfig& config) {
  config.validate();
  Superpopulation pop;
  const auto m = static_cast<std::size_t>(config.m);
  pop.m = config.m;
  pop.weibull_k = config.weibull_k;
  pop.weibull_s = config.weibull_s;
  pop.x.resize(m * kCovariates);
  pop.ps_linear.resize(m);
  pop.risk.resize(m);
  pop.u_treat.resize(m);
  pop.e_event.resize(m);
  pop.e_censor.resize(m);

  const Eigen::Matrix3d factor = continuous_factor();
  Rng rng(config.seed);
  for (std::size_t i = 0; i < m; ++i) {
    Eigen::Vector3d raw(rng.normal(), rng.normal(), rng.normal());
    Eigen::Vector3d cont = factor * raw;
    double* row = &pop.x[i * kCovariates];
    for (int j = 0; j < kContinuous; ++j) row[j] = cont[j];
    for (int j = kContinuous; j < kCovariates; ++j) row[j] = rng.bernoulli(0.5) ? 1.0 : 0.0;
    pop.u_treat[i] = rng.uniform();
    pop.e_event[i] = rng.exponential();
    pop.e_censor[i] = rng.exponential();
    double lin = 0.0;
    double risk = 0.0;
    for (int j = 0; j < kCovariates; ++j) {
      lin += config.beta_ps[j] * row[j];
      risk += config.theta[j] * row[j];
    }
    pop.ps_linear[i] = lin;
    pop.risk[i] = risk;
  }

  assign_treatment(pop, config.c, config.beta0);
  set_treatment_effect(pop, config.alpha_trt);
  apply_censoring(pop, config.t_dagger, config.nu);
  return pop;
}

void assign_treatment(Superpopulation& pop, double c, double beta0) {
  const auto m = static_cast<std::size_t>(pop.m);
  pop.c = c;
  pop.beta0 = beta0;
  pop.ps.resize(m);
  pop.z.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    pop.ps[i] = expit(beta0 + c * pop.ps_linear[i]);
    pop.z[i] = pop.u_treat[i] < pop.ps[i] ? 1 : 0;
  }
  // Observed data depend on z; refresh if already derived.
  if (!pop.t0.empty()) apply_censoring(pop, pop.t_dagger, pop.nu);
}

void set_treatment_effect(Superpopulation& pop, double alpha_trt) {
  const auto m = static_cast<std::size_t>(pop.m);
  pop.alpha_trt = alpha_trt;
  pop.t0.resize(m);
  pop.t1.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    pop.t0[i] = weibull_time(pop.e_event[i], pop.risk[i], pop.weibull_k, pop.weibull_s);
    pop.t1[i] = weibull_time(pop.e_event[i], alpha_trt + pop.risk[i], pop.weibull_k,
                             pop.weibull_s);
  }
  if (!pop.time.empty()) apply_censoring(pop, pop.t_dagger, pop.nu);
}

void apply_censoring(Superpopulation& pop, double t_dagger, std::array<double, 2> nu) {
  if (!(t_dagger > 0.0))
    detail::fail(ErrorCode::kValidation, "follow-up time must be positive", "t_dagger");
  for (double rate : nu)
    if (!(rate >= 0.0) || !std::isfinite(rate))
      detail::fail(ErrorCode::kValidation, "censoring rate must be finite and >= 0", "nu");
  const auto m = static_cast<std::size_t>(pop.m);
  pop.t_dagger = t_dagger;
  pop.nu = nu;
  pop.time.resize(m);
  pop.event.resize(m);
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const int arm = pop.z[i];
    const double t_star = arm == 1 ? pop.t1[i] : pop.t0[i];
    const double c_rand = nu[arm] > 0.0 ? pop.e_censor[i] / nu[arm] : inf;
    const double cutoff = std::min(c_rand, t_dagger);
    pop.event[i] = t_star <= cutoff ? 1 : 0;
    pop.time[i] = std::min(t_star, cutoff);
  }
}

double empirical_overlap(std::span<const double> ps, std::span<const int> z) {
  std::array<double, kHistogramBins> h1{};
  std::array<double, kHistogramBins> h0{};
  double n1 = 0.0;
  double n0 = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto bin = static_cast<int>(ps[i] * kHistogramBins);
    bin = std::clamp(bin, 0, kHistogramBins - 1);
    if (z[i] == 1) {
      h1[bin] += 1.0;
      n1 += 1.0;
    } else {
      h0[bin] += 1.0;
      n0 += 1.0;
    }
  }
  if (n1 == 0.0 || n0 == 0.0)
    detail::fail(ErrorCode::kDegenerate, "overlap needs both arms", "z");
  double bc = 0.0;
  for (int k = 0; k < kHistogramBins; ++k) bc += std::sqrt(h1[k] / n1 * h0[k] / n0);
  return bc;
}

std::vector<double> true_weights(const Superpopulation& pop, WeightKind scheme) {
  const WeightScheme w = WeightScheme::of_kind(scheme, pop.treated_share());
  std::vector<double> out(static_cast<std::size_t>(pop.m));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = w.weight(pop.z[i], pop.ps[i]);
  return out;
}

}  // namespace survpower
