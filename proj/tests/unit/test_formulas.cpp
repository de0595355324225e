#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracle_values.hpp"
#include "survpower/error.hpp"
#include "survpower/formulas.hpp"
#include "survpower/overlap.hpp"

using namespace survpower;
using doctest::Approx;

namespace {
const double kLn06 = std::log(0.6);

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kValidation;
}
}  // namespace

TEST_CASE("lambda pair") {
  auto [a1, a0] = lambda_pair(0.5, 0.0);
  CHECK(a1 == 1.0);
  CHECK(a0 == 1.0);
  auto [b1, b0] = lambda_pair(0.5, kLn06);
  CHECK(b1 == Approx(oracle::kLambda1Half06).epsilon(1e-14));
  CHECK(b0 == Approx(oracle::kLambda0Half06).epsilon(1e-14));
  auto [c1, c0] = lambda_pair(1.0 / 3.0, 0.0);
  CHECK(c1 == Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(c0 == Approx(std::sqrt(2.0)).epsilon(1e-14));
  for (double r = 0.05; r < 1.0; r += 0.1)
    for (double t = -2.0; t <= 2.0; t += 0.25) {
      auto [l1, l0] = lambda_pair(r, t);
      CHECK(std::abs(l1 * l0 - 1.0) < 1e-12);
    }
  CHECK(code_of([] { lambda_pair(1.0, 0.0); }) == ErrorCode::kDomain);
}

TEST_CASE("randomized-trial variance") {
  CHECK(v_rct(0.5, 0.0, 1.0, 1.0).value == Approx(4.0).epsilon(1e-15));
  CHECK(v_rct(0.5, kLn06, 1.0, 1.0).value == Approx(oracle::kVrctHalf06).epsilon(1e-13));
  CHECK(v_rct(1.0 / 3.0, kLn06, 0.8, 1.0).value == Approx(oracle::kVrctThird06).epsilon(1e-13));
  CHECK(v_rct(0.5, kLn06, 1.0, 1.0).scale == Scale::kUnits);

  CHECK(v_rct_equal_censoring(0.5, 0.0, 1.0).value == Approx(4.0));
  CHECK(v_rct_equal_censoring(0.5, kLn06, 0.5).value ==
        Approx(oracle::kVrctHalf06D05).epsilon(1e-13));
  for (double r : {0.2, 0.5, 0.7})
    for (double t : {-1.0, -0.3, 0.4})
      for (double d : {0.3, 0.9}) {
        CHECK(v_rct_equal_censoring(r, t, d).value ==
              Approx(v_rct(r, t, d, d).value).epsilon(1e-14));
      }
  // Relabelling treatment and control.
  for (double r : {0.2, 0.45, 0.8})
    for (double t : {-1.2, 0.3})
      CHECK(v_rct(r, t, 0.7, 0.9).value == Approx(v_rct(1 - r, -t, 0.9, 0.7).value).epsilon(1e-13));

  CHECK(code_of([] { v_rct(0.5, 0.0, 0.0, 1.0); }) == ErrorCode::kDomain);
  CHECK(code_of([] { v_rct(0.5, 0.0, 1.2, 1.0); }) == ErrorCode::kDomain);
}

TEST_CASE("variance scale conversion") {
  const VarianceValue units{6.0, Scale::kUnits};
  const VarianceValue events = units.to_events(0.5);
  CHECK(events.scale == Scale::kEvents);
  CHECK(events.value == Approx(3.0));
  CHECK(events.to_units(0.5).value == Approx(6.0));
}

TEST_CASE("Schoenfeld and Freedman comparators") {
  CHECK(v_schoenfeld(0.5).value == 4.0);
  CHECK(v_schoenfeld(1.0 / 3.0).value == Approx(4.5).epsilon(1e-15));
  CHECK(v_schoenfeld(0.5).scale == Scale::kEvents);
  for (double r = 0.05; r < 0.5; r += 0.05)
    CHECK(v_schoenfeld(r).value == Approx(v_schoenfeld(1 - r).value).epsilon(1e-14));

  CHECK(v_freedman(0.5, kLn06).value == Approx(oracle::kFreedmanHalf06).epsilon(1e-13));
  CHECK(v_freedman(1.0 / 3.0, std::log(0.4)).value ==
        Approx(oracle::kFreedmanThird04).epsilon(1e-13));
  CHECK(v_freedman(0.3, 0.0).value == Approx(v_schoenfeld(0.3).value));
  CHECK(v_freedman(0.3, 1e-9).value == Approx(v_schoenfeld(0.3).value).epsilon(1e-8));
  // Events-scale proposed over Freedman at HR 0.6: about 1.16.
  CHECK(v_rct(0.5, kLn06, 1, 1).value / v_freedman(0.5, kLn06).value == Approx(1.16).epsilon(0.005));
}

TEST_CASE("balanced-design ratios") {
  const double hr[] = {0.8, 0.6, 0.4};
  const double sch[] = {oracle::kRatioSchoenfeld08, oracle::kRatioSchoenfeld06,
                        oracle::kRatioSchoenfeld04};
  const double fre[] = {oracle::kRatioFreedman08, oracle::kRatioFreedman06,
                        oracle::kRatioFreedman04};
  for (int i = 0; i < 3; ++i) {
    const double t = std::log(hr[i]);
    CHECK(ratio_schoenfeld(t) == Approx(sch[i]).epsilon(1e-13));
    CHECK(ratio_freedman(t) == Approx(fre[i]).epsilon(1e-13));
    // Ratios agree with the variance functions they summarize.
    CHECK(ratio_schoenfeld(t) == Approx(v_rct(0.5, t, 1, 1).value / v_schoenfeld(0.5).value));
    CHECK(ratio_freedman(t) == Approx(v_rct(0.5, t, 1, 1).value / v_freedman(0.5, t).value));
  }
  CHECK(ratio_schoenfeld(0.0) == 1.0);
  CHECK(ratio_freedman(0.0) == 1.0);
  CHECK(ratio_freedman(1e-8) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ordering and shape of the balanced ratios on a grid") {
  double prev_s = 1.0;
  double prev_f = 1.0;
  for (int i = 1; i <= 80; ++i) {
    const double t = 0.025 * i;
    const double s = ratio_schoenfeld(t);
    const double f = ratio_freedman(t);
    CHECK(s == Approx(ratio_schoenfeld(-t)).epsilon(1e-15));
    CHECK(f == Approx(ratio_freedman(-t)).epsilon(1e-15));
    CHECK(s > prev_s);
    CHECK(f > prev_f);
    prev_s = s;
    prev_f = f;
    for (double sign : {-1.0, 1.0}) {
      const double tau = sign * t;
      const double proposed = v_rct(0.5, tau, 1, 1).to_events(1.0).value;
      const double freedman = v_freedman(0.5, tau).value;
      const double schoenfeld = v_schoenfeld(0.5).value;
      CHECK(proposed > freedman);
      CHECK(freedman > schoenfeld);
    }
  }
  CHECK(v_rct(0.5, 0.0, 1, 1).value == Approx(v_freedman(0.5, 0.0).value));
}

TEST_CASE("observational IPW variance") {
  CHECK(v_obs(0.5, 0.0, 1, 1, beta_from_shapes(3, 3)).value == Approx(5.0).epsilon(1e-14));
  CHECK(v_obs(1.0 / 3.0, kLn06, 1, 1, beta_from_shapes(5, 10)).value ==
        Approx(oracle::kVobsThird06A5).epsilon(1e-13));
  // Large shapes recover the randomized value.
  const double a = 1e7;
  CHECK(v_obs(0.3, -0.4, 0.7, 0.9, beta_from_shapes(a, a * 0.7 / 0.3)).value ==
        Approx(v_rct(0.3, -0.4, 0.7, 0.9).value).epsilon(1e-5));
  CHECK(v_obs(0.5, kLn06, 1, 1, beta_from_shapes(1.01, 1.01)).value > 100.0);
  CHECK(code_of([] { v_obs(0.5, kLn06, 1, 1, beta_from_shapes(1.0, 1.0)); }) ==
        ErrorCode::kInfiniteVariance);
  try {
    v_obs(0.5, kLn06, 1, 1, beta_from_shapes(0.8, 0.8));
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("0.785") != std::string::npos);
    CHECK(e.field() == "phi");
  }
}

TEST_CASE("observational variance dominates and decreases as overlap improves") {
  // r is the mean of the propensity distribution.
  for (double t : {-0.9, -0.3, 0.5})
    for (double a = 1.1; a < 60; a *= 1.7)
      for (double b = 1.1; b < 60; b *= 1.7) {
        const double r = a / (a + b);
        const double v = v_obs(r, t, 0.8, 0.6, beta_from_shapes(a, b)).value;
        CHECK(v >= v_rct(r, t, 0.8, 0.6).value * (1 - 1e-12));
        // Scaling both shapes keeps the mean and concentrates e.
        CHECK(v_obs(r, t, 0.8, 0.6, beta_from_shapes(a * 1.3, b * 1.3)).value < v);
      }
}

TEST_CASE("observational variance is not monotone in one shape alone") {
  // Raising a shrinks the treated inflation 1 + b/(a-1) but grows the
  // control inflation 1 + a/(b-1).
  const double v = v_obs(0.5, -0.5, 0.8, 0.8, beta_from_shapes(10, 1.5)).value;
  CHECK(v_obs(0.5, -0.5, 0.8, 0.8, beta_from_shapes(13, 1.5)).value > v);
}

TEST_CASE("Hsieh-Lavori comparator") {
  CHECK(v_hsieh_lavori(0.5, beta_from_shapes(3, 3)).value == Approx(14.0 / 3.0).epsilon(1e-14));
  CHECK(v_hsieh_lavori(0.4, beta_from_shapes(1e9, 1.5e9)).value ==
        Approx(v_schoenfeld(0.4).value).epsilon(1e-8));
  for (double s : {0.5, 2.0, 11.0}) {
    const double r2 = 1.0 / (s + 1.0);
    CHECK(1.0 + 1.0 / s == Approx(1.0 / (1.0 - r2)).epsilon(1e-14));
    CHECK(beta_moments(beta_from_shapes(s / 2, s / 2)).r_squared() == Approx(r2).epsilon(1e-14));
  }
}

TEST_CASE("sample size and power") {
  const VarianceValue v4{4.0, Scale::kUnits};
  CHECK(sample_size_raw(4.0, kLn06, 0.05, 0.8) == Approx(oracle::kRawNV4).epsilon(1e-12));
  CHECK(sample_size(v4, kLn06, 0.05, 0.8) == 95);
  CHECK(sample_size_raw(8.0, kLn06, 0.05, 0.8) ==
        Approx(2 * sample_size_raw(4.0, kLn06, 0.05, 0.8)).epsilon(1e-14));
  CHECK(std::abs(sample_size_raw(4.0, kLn06, 0.05, 0.05)) < 1e-12);
  CHECK(code_of([&] { sample_size(v4, 0.0, 0.05, 0.8); }) == ErrorCode::kDegenerate);
  CHECK(code_of([&] { power_at_n(4.0, 0.0, 0.05, 10); }) == ErrorCode::kDegenerate);

  CHECK(power_at_n(4.0, kLn06, 0.05, 95) == Approx(oracle::kPowerV4N95).epsilon(1e-12));
  CHECK(power_at_n(4.0, kLn06, 0.05, 0) == Approx(0.05).epsilon(1e-12));
  for (double v : {3.0, 4.8, 9.1})
    for (double target : {0.7, 0.8, 0.9}) {
      const auto n = sample_size({v, Scale::kUnits}, kLn06, 0.05, target);
      const double p = power_at_n(v, kLn06, 0.05, static_cast<double>(n));
      CHECK(p >= target);
      CHECK(p < target + 0.01);
    }

  // Two-sided at alpha equals one-sided at alpha / 2.
  CHECK(sample_size(v4, kLn06, 0.05, 0.8, Sides::kTwo) == sample_size(v4, kLn06, 0.025, 0.8));

  std::int64_t prev = sample_size(v4, -0.05, 0.05, 0.8);
  for (double t = -0.1; t > -2.0; t -= 0.05) {
    const auto n = sample_size(v4, t, 0.05, 0.8);
    CHECK(n <= prev);
    prev = n;
  }
  prev = 0;
  for (double p = 0.5; p < 0.99; p += 0.05) {
    const auto n = sample_size(v4, kLn06, 0.05, p);
    CHECK(n > prev);
    prev = n;
  }
  // Events-scale comparator converted with d.
  CHECK(sample_size_units_from_events(v_schoenfeld(0.5), 0.5, kLn06, 0.05, 0.8) ==
        static_cast<std::int64_t>(std::ceil(oracle::kRawNV4 / 0.5)));
}

TEST_CASE("conservativeness threshold") {
  using S = ConservativenessThreshold::Status;
  const double hr[] = {0.8, 0.6, 0.4};
  const double half[] = {oracle::kGammaHalf08, oracle::kGammaHalf06, oracle::kGammaHalf04};
  const double third[] = {oracle::kGammaThird08, oracle::kGammaThird06, oracle::kGammaThird04};
  for (int i = 0; i < 3; ++i) {
    const auto g = conservativeness_gamma(0.5, std::log(hr[i]));
    CHECK(g.status == S::kValue);
    CHECK(g.gamma == Approx(half[i]).epsilon(1e-12));
    CHECK(conservativeness_gamma(1.0 / 3.0, std::log(hr[i])).gamma ==
          Approx(third[i]).epsilon(1e-10));
  }
  CHECK(conservativeness_gamma(0.5, kLn06).gamma == Approx(0.078).epsilon(0.002 / 0.078));
  CHECK(conservativeness_gamma(0.3, 0.4).status == S::kNotApplicable);
  CHECK(conservativeness_gamma(0.7, -0.4).status == S::kNotApplicable);
  CHECK(conservativeness_gamma(0.7, 0.4).status == S::kValue);
  CHECK(conservativeness_gamma(0.5, 0.0).status == S::kTriviallyConservative);
  const double g = conservativeness_gamma(0.7, 0.4).gamma;
  CHECK(g > 0.0);
  CHECK(g < 1.0);
}

TEST_CASE("design inputs validation") {
  DesignInputs in;
  in.tau0 = kLn06;
  CHECK_NOTHROW(in.validate());
  CHECK(in.d() == 1.0);
  in.alpha = 0.9;
  CHECK(code_of([&] { in.validate(); }) == ErrorCode::kDomain);
  in.alpha = 0.05;
  in.d1 = 0.0;
  CHECK(code_of([&] { in.validate(); }) == ErrorCode::kDomain);
}
