#include "api.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <string>

#include "payload.hpp"
#include "survpower/design_effect.hpp"
#include "survpower/epsilon_bounds.hpp"
#include "survpower/error.hpp"
#include "survpower/formulas.hpp"
#include "survpower/overlap.hpp"
#include "survpower/simulation.hpp"
#include "survpower/version.hpp"

namespace survpower::api {

namespace {

constexpr std::uint64_t kDefaultSeed = 20240601;

Json engine_document() { return Json{{"name", "survpower"}, {"version", kVersion}}; }

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

// ---------------------------------------------------------------------------
// Shared payload pieces

struct EffectInput {
  double tau0 = 0.0;
};

std::optional<double> read_effect(Payload& p, bool required) {
  auto hr = p.number("hr");
  auto tau0 = p.number("tau0");
  if (hr && tau0) invalid("hr", "give exactly one of hr and tau0");
  if (hr) {
    require_positive("hr", *hr);
    return std::log(*hr);
  }
  if (tau0) return *tau0;
  if (required) invalid("hr", "one of hr and tau0 is required");
  return std::nullopt;
}

struct Rates {
  double d1 = 1.0;
  double d0 = 1.0;
};

void check_rate(const std::string& field, double d) {
  if (!(d > 0.0 && d <= 1.0)) invalid(field, field + " must lie in (0, 1]");
}

// Arm-specific rates win over a combined d when both appear.
std::optional<Rates> read_rates(Payload& p, bool required) {
  auto d = p.number("d");
  auto d1 = p.number("d1");
  auto d0 = p.number("d0");
  if (d1.has_value() != d0.has_value())
    invalid(d1 ? "d0" : "d1", "d1 and d0 must be given together");
  if (d1) {
    check_rate("d1", *d1);
    check_rate("d0", *d0);
    if (d) check_rate("d", *d);
    return Rates{*d1, *d0};
  }
  if (d) {
    check_rate("d", *d);
    return Rates{*d, *d};
  }
  if (required) invalid("d", "an event rate (d, or d1 and d0) is required");
  return std::nullopt;
}

double read_r(Payload& p) {
  const double r = p.required_number("r");
  require_open_unit("r", r);
  return r;
}

// alpha, power, sides.
void read_test(Payload& p, DesignInputs& design) {
  design.alpha = p.number("alpha", 0.05);
  design.power = p.number("power", 0.8);
  require_open_unit("alpha", design.alpha);
  require_open_unit("power", design.power);
  if (!(design.alpha < design.power)) invalid("power", "power must exceed alpha");
  const auto sides = p.integer("sides").value_or(1);
  if (sides != 1 && sides != 2) invalid("sides", "sides must be 1 or 2");
  design.sides = sides == 2 ? Sides::kTwo : Sides::kOne;
}

DesignInputs read_design(Payload& p, bool effect_required = true) {
  DesignInputs design;
  design.r = read_r(p);
  design.tau0 = read_effect(p, effect_required).value_or(0.0);
  const Rates rates = *read_rates(p, true);
  design.d1 = rates.d1;
  design.d0 = rates.d0;
  read_test(p, design);
  return design;
}

double read_phi(Payload& p, const char* key = "phi") {
  const double phi = p.required_number(key);
  if (!(phi > 0.0 && phi < 1.0))
    invalid(p.path(key), std::string(key) + " must lie in (0, 1); use rct for phi = 1");
  return phi;
}

WeightKind read_scheme(Payload& p) {
  const std::string s = p.string("scheme").value_or("ipw");
  if (s == "ipw") return WeightKind::kIpw;
  if (s == "overlap") return WeightKind::kOverlap;
  if (s == "treated") return WeightKind::kTreated;
  invalid("scheme", "scheme must be one of ipw, overlap, treated");
}

KappaOptions read_kappa_options(Payload& p) {
  KappaOptions opts;
  opts.seed = p.unsigned_integer("seed").value_or(kDefaultSeed);
  opts.n_draws = p.integer("kappa_draws").value_or(kDefaultKappaDraws);
  if (opts.n_draws < kMinKappaDraws)
    invalid("kappa_draws", "kappa_draws must be at least " + std::to_string(kMinKappaDraws));
  if (opts.n_draws > 100'000'000) invalid("kappa_draws", "kappa_draws must be at most 1e8");
  if (auto cap = p.number("weight_cap")) {
    require_positive("weight_cap", *cap);
    opts.weight_cap = *cap;
  }
  return opts;
}

SensitivityInputs read_sensitivity(Payload& p) {
  SensitivityInputs sens;
  sens.rho1 = p.number("rho1", 0.5);
  sens.rho0 = p.number("rho0", 0.5);
  if (!(sens.rho1 >= 0.0 && sens.rho1 <= 1.0)) invalid(p.path("rho1"), "rho1 must lie in [0, 1]");
  if (!(sens.rho0 >= 0.0 && sens.rho0 <= 1.0)) invalid(p.path("rho0"), "rho0 must lie in [0, 1]");
  if (auto g = p.number("gamma")) {
    if (!(*g > 0.0 && *g < 1.0)) invalid(p.path("gamma"), "gamma must lie in (0, 1)");
    sens.gamma = *g;
  }
  return sens;
}

// ---------------------------------------------------------------------------
// Design-stage sample size

struct SizedDesign {
  double variance = 0.0;  // units scale
  double n_raw = 0.0;
  std::int64_t n = 0;
  std::optional<BetaOverlap> beta;
  std::optional<KappaEstimate> kappa;
  double v_rct = 0.0;
};

SizedDesign size_rct(const DesignInputs& in) {
  SizedDesign out;
  out.v_rct = out.variance = v_rct(in.r, in.tau0, in.d1, in.d0).value;
  out.n_raw = sample_size_raw(out.variance, in.tau0, in.alpha, in.power, in.sides);
  out.n = sample_size({out.variance, Scale::kUnits}, in.tau0, in.alpha, in.power, in.sides);
  return out;
}

SizedDesign size_obs(const DesignInputs& in, double phi, WeightKind scheme,
                     const KappaOptions& kappa_opts) {
  SizedDesign out;
  out.beta = solve_ab(in.r, phi);
  out.v_rct = v_rct(in.r, in.tau0, in.d1, in.d0).value;
  if (scheme == WeightKind::kIpw) {
    out.variance = v_obs(in.r, in.tau0, in.d1, in.d0, *out.beta).value;
    out.n_raw = sample_size_raw(out.variance, in.tau0, in.alpha, in.power, in.sides);
    out.n = sample_size({out.variance, Scale::kUnits}, in.tau0, in.alpha, in.power, in.sides);
    return out;
  }
  out.kappa = kappa_de_monte_carlo(in.r, phi, WeightScheme::of_kind(scheme, in.r), kappa_opts);
  const double n_rct_raw = sample_size_raw(out.v_rct, in.tau0, in.alpha, in.power, in.sides);
  out.variance = out.kappa->value * out.v_rct;
  out.n_raw = out.kappa->value * n_rct_raw;
  out.n = sample_size_with_vif(n_rct_raw, out.kappa->value);
  return out;
}

Json comparators(const DesignInputs& in, const std::optional<BetaOverlap>& beta) {
  const double d = in.d();
  Json c;
  c["schoenfeld_n"] =
      sample_size_units_from_events(v_schoenfeld(in.r), d, in.tau0, in.alpha, in.power, in.sides);
  c["freedman_n"] = sample_size_units_from_events(v_freedman(in.r, in.tau0), d, in.tau0,
                                                  in.alpha, in.power, in.sides);
  if (beta) {
    c["hsieh_lavori_n"] = sample_size_units_from_events(v_hsieh_lavori(in.r, *beta), d, in.tau0,
                                                        in.alpha, in.power, in.sides);
  }
  return c;
}

Json kappa_document(const KappaEstimate& k) {
  return Json{{"value", k.value},
              {"mc_std_error", k.mc_std_error},
              {"draws", k.n_draws},
              {"seed", k.seed}};
}

Json overlap_document(const BetaOverlap& beta) {
  return Json{{"phi", beta.phi},
              {"a", beta.a},
              {"b", beta.b},
              {"category", std::string(to_string(overlap_category(beta.phi)))},
              {"min_phi_finite_variance", min_phi_for_finite_variance(beta.r)}};
}

Json bound_document(const EpsilonBound& e) {
  return Json{{"m1", e.m1},
              {"m2", optional_number(e.m2)},
              {"m3", optional_number(e.m3)},
              {"m4", optional_number(e.m4)},
              {"bound", e.bound},
              {"variance_units", e.variance},
              {"n", e.n},
              {"n_low", e.n_low},
              {"n_high", e.n_high},
              {"n_low_clamped", e.n_low_clamped}};
}

Json conservativeness_document(const DesignInputs& in) {
  const auto t = conservativeness_gamma(in.r, in.tau0);
  using S = ConservativenessThreshold::Status;
  Json j;
  switch (t.status) {
    case S::kValue:
      j["status"] = "value";
      j["gamma"] = t.gamma;
      break;
    case S::kNotApplicable:
      j["status"] = "not-applicable";
      j["gamma"] = nullptr;
      break;
    case S::kTriviallyConservative:
      j["status"] = "trivially-conservative";
      j["gamma"] = nullptr;
      break;
  }
  return j;
}

Json finish_report(Json report, const Json& payload, std::optional<std::uint64_t> seed = {}) {
  report["inputs"] = payload;
  report["engine"] = engine_document();
  if (seed) report["seed"] = *seed;
  return report;
}

// ---------------------------------------------------------------------------
// Commands

Json run_rct(const Json& payload) {
  Payload p(payload);
  const DesignInputs in = read_design(p);
  p.finish();
  const SizedDesign s = size_rct(in);
  Json report;
  report["command"] = "rct";
  report["variance_units"] = s.variance;
  report["n_raw"] = s.n_raw;
  report["n"] = s.n;
  report["expected_events"] = static_cast<double>(s.n) * in.d();
  report["power_at_n"] = power_at_n(s.variance, in.tau0, in.alpha, static_cast<double>(s.n), in.sides);
  report["comparators"] = comparators(in, std::nullopt);
  report["conservativeness"] = conservativeness_document(in);
  return finish_report(std::move(report), payload);
}

Json run_obs(const Json& payload) {
  Payload p(payload);
  const DesignInputs in = read_design(p);
  const double phi = read_phi(p);
  const WeightKind scheme = read_scheme(p);
  const bool seeded = p.has("seed");
  const KappaOptions kopts = read_kappa_options(p);
  std::optional<SensitivityInputs> sens;
  if (const Json* s = p.object("sensitivity")) {
    Payload sp(*s, "sensitivity.");
    sens = read_sensitivity(sp);
    sp.finish();
  }
  p.finish();
  if (sens && scheme != WeightKind::kIpw)
    invalid("sensitivity", "sensitivity bounds are defined for ipw weights only");

  const SizedDesign s = size_obs(in, phi, scheme, kopts);
  Json report;
  report["command"] = "obs";
  report["scheme"] = std::string(to_string(scheme));
  report["variance_units"] = s.variance;
  report["n_raw"] = s.n_raw;
  report["n"] = s.n;
  report["expected_events"] = static_cast<double>(s.n) * in.d();
  report["power_at_n"] = power_at_n(s.variance, in.tau0, in.alpha, static_cast<double>(s.n), in.sides);
  if (s.kappa) {
    Json vif = kappa_document(*s.kappa);
    vif["method"] = "kish-monte-carlo";
    report["vif"] = std::move(vif);
  } else {
    report["vif"] = Json{{"value", s.variance / s.v_rct}, {"method", "analytic"}};
  }
  report["rct_n"] = sample_size({s.v_rct, Scale::kUnits}, in.tau0, in.alpha, in.power, in.sides);
  report["overlap"] = overlap_document(*s.beta);
  report["comparators"] = comparators(in, s.beta);
  if (sens) report["sensitivity"] = bound_document(epsilon_bound(in, *s.beta, *sens));
  std::optional<std::uint64_t> seed;
  if (s.kappa || seeded) seed = kopts.seed;
  return finish_report(std::move(report), payload, seed);
}

Json run_vif(const Json& payload) {
  Payload p(payload);
  const double r = read_r(p);
  const double phi = read_phi(p);
  const WeightKind scheme = read_scheme(p);
  const KappaOptions kopts = read_kappa_options(p);
  const auto tau0 = read_effect(p, false);
  const auto rates = read_rates(p, false);
  p.finish();

  const BetaOverlap beta = solve_ab(r, phi);
  const KappaEstimate k = kappa_de_monte_carlo(r, phi, WeightScheme::of_kind(scheme, r), kopts);
  Json report;
  report["command"] = "vif";
  report["scheme"] = std::string(to_string(scheme));
  report["kappa"] = kappa_document(k);
  report["overlap"] = overlap_document(beta);
  const bool finite = beta.a > 1.0 && beta.b > 1.0;
  if (scheme == WeightKind::kIpw && finite) {
    report["kappa_ipw_analytic"] = kappa_ipw_analytic(r, beta.a, beta.b);
    if (tau0 && rates) {
      report["vif_analytic"] = vif_analytic_ratio(r, *tau0, rates->d1, rates->d0, beta.a, beta.b);
      report["discrepancy"] = kappa_discrepancy(r, *tau0, rates->d1, rates->d0, beta.a, beta.b);
    }
  }
  return finish_report(std::move(report), payload, kopts.seed);
}

Json run_bounds(const Json& payload) {
  Payload p(payload);
  const DesignInputs in = read_design(p);
  const double phi = read_phi(p);
  const SensitivityInputs sens = read_sensitivity(p);
  p.finish();
  const BetaOverlap beta = solve_ab(in.r, phi);
  Json report;
  report["command"] = "bounds";
  report["overlap"] = overlap_document(beta);
  const EpsilonBound e = epsilon_bound(in, beta, sens);
  const Json bounds = bound_document(e);
  for (const auto& [key, value] : bounds.items()) report[key] = value;
  return finish_report(std::move(report), payload);
}

std::vector<double> grid(double from, double to, std::int64_t points) {
  std::vector<double> out(static_cast<std::size_t>(points));
  for (std::int64_t i = 0; i < points; ++i) {
    out[i] = from + (to - from) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  out.back() = to;
  return out;
}

Json run_curve(const Json& payload) {
  Payload p(payload);
  const std::string sweep = p.string("sweep").value_or("");
  if (sweep != "n" && sweep != "phi" && sweep != "hr")
    invalid("sweep", "sweep must be one of n, phi, hr");
  const double from = p.required_number("from");
  const double to = p.required_number("to");
  const std::int64_t points = p.integer("points").value_or(20);
  if (points < 2 || points > 1000) invalid("points", "points must lie in [2, 1000]");
  if (from == to) invalid("to", "sweep range has zero width");

  DesignInputs in = read_design(p, sweep != "hr");
  std::optional<double> phi;
  if (sweep != "phi" && p.has("phi")) phi = read_phi(p);
  if (sweep == "phi") p.number("phi");  // swept; a fixed value would be ignored
  const WeightKind scheme = read_scheme(p);
  const bool seeded = p.has("seed");
  const KappaOptions kopts = read_kappa_options(p);
  p.finish();
  if (sweep == "phi" && payload.contains("phi") && !payload.at("phi").is_null())
    invalid("phi", "phi is the swept axis; use from and to");

  Json pts = Json::array();
  bool used_kappa = false;
  auto sized = [&](const DesignInputs& d, std::optional<double> ph) {
    if (!ph) return size_rct(d);
    SizedDesign s = size_obs(d, *ph, scheme, kopts);
    used_kappa = used_kappa || s.kappa.has_value();
    return s;
  };

  if (sweep == "n") {
    if (!(from >= 1.0 && to >= 1.0)) invalid("from", "sample sizes must be at least 1");
    const SizedDesign s = sized(in, phi);
    for (double n : grid(from, to, points)) {
      const double nn = std::round(n);
      pts.push_back(Json{{"n", static_cast<std::int64_t>(nn)},
                         {"power", power_at_n(s.variance, in.tau0, in.alpha, nn, in.sides)}});
    }
  } else if (sweep == "phi") {
    for (double ph : {from, to})
      if (!(ph > 0.0 && ph < 1.0)) invalid("from", "phi sweep must stay inside (0, 1)");
    for (double ph : grid(from, to, points)) {
      const SizedDesign s = sized(in, ph);
      pts.push_back(Json{{"phi", ph},
                         {"n", s.n},
                         {"power", power_at_n(s.variance, in.tau0, in.alpha,
                                              static_cast<double>(s.n), in.sides)}});
    }
  } else {
    if (payload.contains("hr") || payload.contains("tau0"))
      invalid("hr", "hr is the swept axis; use from and to");
    for (double hr : {from, to})
      if (!(hr > 0.0)) invalid("from", "hazard ratios must be positive");
    for (double hr : grid(from, to, points)) {
      DesignInputs d = in;
      d.tau0 = std::log(hr);
      if (d.tau0 == 0.0) {
        pts.push_back(Json{{"hr", hr}, {"n", nullptr}, {"power", nullptr}, {"divergent", true}});
        continue;
      }
      const SizedDesign s = sized(d, phi);
      pts.push_back(Json{{"hr", hr},
                         {"n", s.n},
                         {"power", power_at_n(s.variance, d.tau0, d.alpha,
                                              static_cast<double>(s.n), d.sides)},
                         {"divergent", false}});
    }
  }
  Json report;
  report["command"] = "curve";
  report["sweep"] = sweep;
  report["design"] = phi || sweep == "phi" ? "obs" : "rct";
  report["points"] = std::move(pts);
  std::optional<std::uint64_t> seed;
  if (used_kappa || seeded) seed = kopts.seed;
  return finish_report(std::move(report), payload, seed);
}

SampleSizeMethod read_method(Payload& p) {
  const std::string s = p.string("method").value_or("proposed");
  if (s == "proposed") return SampleSizeMethod::kProposed;
  if (s == "schoenfeld") return SampleSizeMethod::kSchoenfeld;
  if (s == "freedman") return SampleSizeMethod::kFreedman;
  if (s == "hsieh_lavori") return SampleSizeMethod::kHsiehLavori;
  invalid("method", "method must be one of proposed, schoenfeld, freedman, hsieh_lavori");
}

Json run_simulate(const Json& payload) {
  Payload p(payload);
  ScenarioSpec spec;
  SimConfig& cfg = spec.config;
  cfg.m = p.integer("m").value_or(100'000);
  if (cfg.m < 10'000 || cfg.m > 20'000'000) invalid("m", "m must lie in [1e4, 2e7]");
  cfg.seed = p.unsigned_integer("seed").value_or(kDefaultSeed);
  cfg.target_r = read_r(p);
  cfg.target_hr = std::exp(*read_effect(p, true));
  if (cfg.target_hr == 1.0) invalid("hr", "the simulation needs a non-null effect");
  cfg.target_phi = p.number("phi", 1.0);
  if (!(cfg.target_phi > 0.0 && cfg.target_phi <= 1.0)) invalid("phi", "phi must lie in (0, 1]");
  if (const Json* rates = p.array("censor_rates")) {
    if (rates->size() != 2) invalid("censor_rates", "censor_rates is [control, treated]");
    for (std::size_t i = 0; i < 2; ++i) {
      if (!(*rates)[i].is_number()) invalid("censor_rates", "censor_rates must be numbers");
      const double share = (*rates)[i].get<double>();
      if (!(share >= 0.0 && share < 1.0)) invalid("censor_rates", "censoring share must lie in [0, 1)");
      cfg.censor_rates[i] = share;
    }
  }
  spec.scheme = read_scheme(p);
  spec.method = read_method(p);
  spec.alpha = p.number("alpha", 0.05);
  spec.power = p.number("power", 0.8);
  require_open_unit("alpha", spec.alpha);
  require_open_unit("power", spec.power);
  spec.b = p.integer("B").value_or(1000);
  if (spec.b < 2 || spec.b > 1'000'000) invalid("B", "B must lie in [2, 1e6]");
  const std::string mode = p.string("mode").value_or("empirical");
  if (mode == "empirical") {
    spec.mode = RejectionMode::kEmpiricalVariance;
  } else if (mode == "robust") {
    spec.mode = RejectionMode::kRobustSe;
  } else {
    invalid("mode", "mode must be empirical or robust");
  }
  if (auto n = p.integer("n")) {
    if (*n < 4 || *n > cfg.m) invalid("n", "n must lie in [4, m]");
    spec.n_override = *n;
  }
  if (auto budget = p.number("budget_seconds")) {
    require_positive("budget_seconds", *budget);
    spec.budget_seconds = *budget;
  }
  spec.kappa_draws = p.integer("kappa_draws").value_or(kDefaultKappaDraws);
  if (spec.kappa_draws < kMinKappaDraws)
    invalid("kappa_draws", "kappa_draws must be at least " + std::to_string(kMinKappaDraws));
  spec.control_survival_frac = p.number("control_survival_frac", 0.2);
  require_open_unit("control_survival_frac", spec.control_survival_frac);
  const bool replicates = p.boolean("replicates").value_or(false);
  p.finish();
  if (spec.method == SampleSizeMethod::kHsiehLavori && spec.randomized())
    invalid("method", "hsieh_lavori needs phi < 1");
  if (spec.randomized() && spec.scheme != WeightKind::kIpw)
    invalid("scheme", "randomized simulations use unit weights; omit scheme");

  const ScenarioResult res = run_scenario(spec);
  Json report;
  report["command"] = "simulate";
  report["method"] = std::string(to_string(spec.method));
  report["scheme"] = std::string(to_string(spec.scheme));
  report["calibration"] = Json{{"c", res.overlap.c},
                               {"beta0", res.overlap.beta0},
                               {"empirical_phi", res.overlap.empirical_phi},
                               {"mean_ps", res.overlap.mean_ps},
                               {"alpha_trt", res.alpha_trt},
                               {"t_dagger", res.followup.t_dagger},
                               {"nu", {res.followup.nu[0], res.followup.nu[1]}},
                               {"censor_share",
                                {res.followup.realized_share[0], res.followup.realized_share[1]}}};
  Json design{{"d1", res.d1}, {"d0", res.d0}, {"d", res.d}, {"variance_units", res.variance},
              {"n_raw", res.n_raw}, {"n", res.n}};
  if (res.beta) design["overlap"] = Json{{"a", res.beta->a}, {"b", res.beta->b}};
  if (res.kappa) design["kappa"] = kappa_document(*res.kappa);
  report["design"] = std::move(design);
  const PowerEstimate& pe = res.power;
  report["power"] = Json{{"n_used", pe.n_used},
                         {"b_requested", pe.b_requested},
                         {"b_replicates", pe.b_replicates},
                         {"failed_replicates", pe.failed_replicates},
                         {"rejections", pe.rejections},
                         {"power", pe.power},
                         {"mc_half_width", pe.mc_half_width},
                         {"mean_tau_hat", pe.mean_tau_hat},
                         {"empirical_sd", pe.empirical_sd},
                         {"budget_exhausted", pe.budget_exhausted}};
  if (replicates) {
    Json reps = Json::array();
    for (std::size_t i = 0; i < pe.tau_hats.size(); ++i)
      reps.push_back(Json{{"tau_hat", pe.tau_hats[i]}, {"robust_se", pe.robust_ses[i]}});
    report["replicates"] = std::move(reps);
  }
  return finish_report(std::move(report), payload, cfg.seed);
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation: return kExitValidation;
    case ErrorCode::kDomain:
    case ErrorCode::kInfiniteVariance:
    case ErrorCode::kExistence:
    case ErrorCode::kDegenerate: return kExitDomain;
    case ErrorCode::kConvergence:
    case ErrorCode::kSeparation: return kExitConvergence;
  }
  return kExitInternal;
}

}  // namespace

bool is_command(std::string_view command) {
  return std::find(std::begin(kCommands), std::end(kCommands), command) != std::end(kCommands);
}

Json error_document(std::string_view code, std::string_view message, const Json& field) {
  return Json{{"code", code}, {"message", message}, {"offending_field", field}};
}

Response dispatch(std::string_view command, const Json& payload) {
  try {
    if (command == "rct") return {kExitOk, run_rct(payload)};
    if (command == "obs") return {kExitOk, run_obs(payload)};
    if (command == "vif") return {kExitOk, run_vif(payload)};
    if (command == "bounds") return {kExitOk, run_bounds(payload)};
    if (command == "curve") return {kExitOk, run_curve(payload)};
    if (command == "simulate") return {kExitOk, run_simulate(payload)};
    return {kExitValidation,
            error_document("validation", "unknown command '" + std::string(command) + "'",
                           "command")};
  } catch (const Error& e) {
    const Json field = e.field().empty() ? Json(nullptr) : Json(e.field());
    return {exit_code_for(e.code()), error_document(to_string(e.code()), e.what(), field)};
  } catch (const Json::exception& e) {
    return {kExitValidation, error_document("validation", e.what(), nullptr)};
  } catch (const std::exception& e) {
    return {kExitInternal, error_document("internal", e.what(), nullptr)};
  }
}

Response dispatch_text(std::string_view command, std::string_view text) {
  Json payload = Json::parse(text.begin(), text.end(), nullptr, false);
  if (payload.is_discarded()) {
    return {kExitValidation, error_document("validation", "malformed JSON body", "body")};
  }
  return dispatch(command, payload);
}

Response dispatch_envelope(const Json& envelope) {
  if (!envelope.is_object() || !envelope.contains("command") ||
      !envelope.at("command").is_string()) {
    return {kExitValidation, error_document("validation", "envelope needs a command", "command")};
  }
  for (const auto& [key, value] : envelope.items()) {
    if (key != "command" && key != "payload")
      return {kExitValidation, error_document("validation", "unknown field '" + key + "'", key)};
  }
  const Json payload = envelope.value("payload", Json::object());
  return dispatch(envelope.at("command").get<std::string>(), payload);
}

std::string render(const Json& doc, bool pretty) {
  return doc.dump(pretty ? 2 : -1) + "\n";
}

int http_status(int exit_code) {
  switch (exit_code) {
    case kExitOk: return 200;
    case kExitValidation: return 400;
    case kExitDomain: return 422;
    default: return 500;
  }
}

Json health_document() { return Json{{"status", "ok"}, {"version", kVersion}}; }

}  // namespace survpower::api
