#include <cmath>
#include <limits>

#include "survpower/error.hpp"
#include "survpower/formulas.hpp"
#include "survpower/random.hpp"
#include "survpower/simulation.hpp"

namespace survpower {

std::string_view to_string(SampleSizeMethod method) {
  switch (method) {
    case SampleSizeMethod::kProposed: return "proposed";
    case SampleSizeMethod::kSchoenfeld: return "schoenfeld";
    case SampleSizeMethod::kFreedman: return "freedman";
    case SampleSizeMethod::kHsiehLavori: return "hsieh_lavori";
  }
  return "unknown";
}

ScenarioResult run_scenario(const ScenarioSpec& spec) {
  const SimConfig& cfg = spec.config;
  cfg.validate();
  if (spec.method == SampleSizeMethod::kHsiehLavori && spec.randomized())
    detail::fail(ErrorCode::kValidation, "hsieh_lavori applies to observational designs only",
                 "method");
  if (spec.scheme == WeightKind::kCustom)
    detail::fail(ErrorCode::kValidation, "custom weights are not simulated", "scheme");

  const double tau0 = std::log(cfg.target_hr);
  const double r = cfg.target_r;
  ScenarioResult out;

  SimConfig base = cfg;
  base.c = 0.0;
  base.beta0 = std::log(r / (1.0 - r));
  base.alpha_trt = 0.0;
  base.t_dagger = std::numeric_limits<double>::infinity();
  base.nu = {0.0, 0.0};
  Superpopulation pop = generate_superpopulation(base);

  out.overlap = calibrate_overlap(pop, r, cfg.target_phi);
  assign_treatment(pop, out.overlap.c, out.overlap.beta0);

  const double t_dagger = followup_time(pop, spec.control_survival_frac);
  apply_censoring(pop, t_dagger, {0.0, 0.0});
  out.alpha_trt = calibrate_alpha(pop, tau0, spec.scheme);
  set_treatment_effect(pop, out.alpha_trt);

  out.followup = calibrate_followup_and_censoring(pop, spec.control_survival_frac,
                                                  cfg.censor_rates);
  apply_censoring(pop, out.followup.t_dagger, out.followup.nu);

  out.d1 = pop.event_rate(1);
  out.d0 = pop.event_rate(0);
  out.d = r * out.d1 + (1.0 - r) * out.d0;

  const double alpha = spec.alpha;
  const double power = spec.power;
  auto from_units = [&](double v_units) {
    out.variance = v_units;
    out.n_raw = sample_size_raw(v_units, tau0, alpha, power);
    out.n = static_cast<std::int64_t>(std::ceil(out.n_raw));
  };
  auto from_events = [&](const VarianceValue& v_events) {
    out.variance = v_events.value / out.d;
    out.n_raw = sample_size_raw(v_events.value, tau0, alpha, power) / out.d;
    out.n = sample_size_units_from_events(v_events, out.d, tau0, alpha, power);
  };

  switch (spec.method) {
    case SampleSizeMethod::kSchoenfeld:
      from_events(v_schoenfeld(r));
      break;
    case SampleSizeMethod::kFreedman:
      from_events(v_freedman(r, tau0));
      break;
    case SampleSizeMethod::kHsiehLavori:
      out.beta = solve_ab(r, cfg.target_phi);
      from_events(v_hsieh_lavori(r, *out.beta));
      break;
    case SampleSizeMethod::kProposed:
      if (spec.randomized()) {
        from_units(v_rct(r, tau0, out.d1, out.d0).value);
      } else if (spec.scheme == WeightKind::kIpw) {
        out.beta = solve_ab(r, cfg.target_phi);
        from_units(v_obs(r, tau0, out.d1, out.d0, *out.beta).value);
      } else {
        out.beta = solve_ab(r, cfg.target_phi);
        KappaOptions opts;
        opts.n_draws = spec.kappa_draws;
        opts.seed = cfg.seed;
        out.kappa = kappa_de_monte_carlo(r, cfg.target_phi, WeightScheme::of_kind(spec.scheme, r),
                                         opts);
        const double v_rct_units = v_rct(r, tau0, out.d1, out.d0).value;
        const double n_rct_raw = sample_size_raw(v_rct_units, tau0, alpha, power);
        out.variance = out.kappa->value * v_rct_units;
        out.n_raw = out.kappa->value * n_rct_raw;
        out.n = sample_size_with_vif(n_rct_raw, out.kappa->value);
      }
      break;
  }
  if (spec.n_override) out.n = *spec.n_override;

  AnalysisSpec analysis;
  analysis.design = spec.randomized() ? AnalysisDesign::kRandomized
                                      : AnalysisDesign::kObservational;
  analysis.scheme = spec.scheme;
  analysis.alpha = alpha;
  analysis.alternative = protective_direction(tau0);
  analysis.mode = spec.mode;
  analysis.seed = splitmix64(cfg.seed ^ 0x5eedULL);
  analysis.treated_fraction = r;
  analysis.budget_seconds = spec.budget_seconds;
  out.power = empirical_power(pop, out.n, spec.b, analysis);
  return out;
}

}  // namespace survpower
