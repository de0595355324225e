#include <doctest.h>

#include <algorithm>

#include <cmath>
#include <vector>

#include "survpower/design_effect.hpp"
#include "survpower/error.hpp"
#include "survpower/formulas.hpp"
#include "survpower/overlap.hpp"
#include "survpower/random.hpp"

using namespace survpower;
using doctest::Approx;

TEST_CASE("weight schemes") {
  const auto ipw = WeightScheme::ipw(0.3);
  CHECK(ipw.treated_weight(0.6) == Approx(0.5));
  CHECK(ipw.control_weight(0.6) == Approx(0.7 / 0.4));
  const auto ato = WeightScheme::overlap();
  CHECK(ato.weight(1, 0.2) == Approx(0.8));
  CHECK(ato.weight(0, 0.2) == Approx(0.2));
  const auto att = WeightScheme::treated();
  CHECK(att.weight(1, 0.9) == 1.0);
  CHECK(att.weight(0, 0.75) == Approx(3.0));
  CHECK(WeightScheme::of_kind(WeightKind::kOverlap, 0.5).kind() == WeightKind::kOverlap);
  CHECK(to_string(WeightKind::kTreated) == "treated");
}

TEST_CASE("Kish design effect") {
  const std::vector<int> z{1, 1, 0, 0};
  CHECK(kish_design_effect(z, std::vector<double>{1, 3, 1, 1}) == Approx(1.125).epsilon(1e-15));
  CHECK(kish_design_effect(z, std::vector<double>{2, 2, 5, 5}) == Approx(1.0).epsilon(1e-15));

  Rng rng(3);
  std::vector<int> zz(500);
  std::vector<double> w(500), scaled(500);
  for (std::size_t i = 0; i < zz.size(); ++i) {
    zz[i] = rng.bernoulli(0.4) ? 1 : 0;
    w[i] = 0.1 + rng.exponential();
    scaled[i] = w[i] * (zz[i] == 1 ? 7.5 : 0.02);
  }
  const double k = kish_design_effect(zz, w);
  CHECK(k > 1.0);
  CHECK(kish_design_effect(zz, scaled) == Approx(k).epsilon(1e-12));

  CHECK_THROWS_AS(kish_design_effect(std::vector<int>{1, 1}, std::vector<double>{1, 1}), Error);
  CHECK_THROWS_AS(kish_design_effect(z, std::vector<double>{1, 1, 0, 0}), Error);
}

TEST_CASE("Kish design effect is at least one") {
  Rng rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<int> z(40);
    std::vector<double> w(40);
    for (int i = 0; i < 40; ++i) {
      z[i] = i % 2;
      w[i] = rng.uniform() * 5 + 1e-3;
    }
    CHECK(kish_design_effect(z, w) >= 1.0 - 1e-12);
  }
}

TEST_CASE("analytic IPW design effect and VIF") {
  CHECK(kappa_ipw_analytic(0.5, 3, 3) == Approx(1.25).epsilon(1e-15));
  CHECK(kappa_ipw_analytic(0.3, 3e8, 7e8) == Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(kappa_ipw_analytic(0.5, 1.0, 3.0), Error);

  for (double r : {0.2, 0.5, 0.65})
    for (double t : {-1.0, -0.2, 0.6})
      for (double k : {1.3, 4.0, 15.0}) {
        // Smaller shape equals k, so both exceed one.
        const double a = k * r / std::min(r, 1 - r);
        const double b = a * (1 - r) / r;
        const auto beta = beta_from_shapes(a, b);
        const double ratio = v_obs(r, t, 0.6, 0.9, beta).value / v_rct(r, t, 0.6, 0.9).value;
        CHECK(vif_analytic_ratio(r, t, 0.6, 0.9, a, b) == Approx(ratio).epsilon(1e-12));
        CHECK(kappa_discrepancy(r, t, 0.6, 0.9, a, b) ==
              Approx(kappa_ipw_analytic(r, a, b) - vif_analytic_ratio(r, t, 0.6, 0.9, a, b))
                  .epsilon(1e-12)
                  .scale(1.0));
      }
  for (double t : {-1.0, 0.3})
    CHECK(vif_analytic_ratio(0.5, t, 0.7, 0.4, 3, 3) == Approx(kappa_ipw_analytic(0.5, 3, 3)));
  CHECK(kappa_discrepancy(0.5, -0.4, 0.7, 0.9, 3, 3) == 0.0);
  // d0 exp(tau0) = d1 exp(-tau0) zeroes the bracket.
  const double t = std::log(0.8);
  CHECK(std::abs(kappa_discrepancy(0.3, t, 0.9, 0.9 * std::exp(-2 * t), 3, 7)) < 1e-15);
  const double disc = kappa_discrepancy(1.0 / 3.0, std::log(0.6), 1, 1, 5, 10);
  CHECK(disc == Approx(kappa_ipw_analytic(1.0 / 3.0, 5, 10) -
                       vif_analytic_ratio(1.0 / 3.0, std::log(0.6), 1, 1, 5, 10))
                    .epsilon(1e-12));
  CHECK(disc != 0.0);
}

TEST_CASE("VIF-based sample size") {
  CHECK(sample_size_with_vif(100.0, 1.25) == 125);
  CHECK(sample_size_with_vif(94.2, 1.0) == 95);
}

TEST_CASE("Monte Carlo design effect") {
  KappaOptions opts;
  opts.n_draws = 200'000;
  opts.seed = 42;
  const auto ipw = WeightScheme::ipw(0.5);
  const KappaEstimate a = kappa_de_monte_carlo(0.5, 0.9, ipw, opts);
  const KappaEstimate b = kappa_de_monte_carlo(0.5, 0.9, ipw, opts);
  CHECK(a.value == b.value);
  CHECK(a.mc_std_error == b.mc_std_error);
  CHECK(a.n_draws == 200'000);
  CHECK(a.seed == 42);

  const auto flat = WeightScheme::custom([](double) { return 1.0; }, [](double) { return 1.0; });
  CHECK(kappa_de_monte_carlo(0.5, 0.9, flat, opts).value == Approx(1.0).epsilon(1e-12));

  const double ato_090 = kappa_de_monte_carlo(0.5, 0.90, WeightScheme::overlap(), opts).value;
  const double ato_099 = kappa_de_monte_carlo(0.5, 0.99, WeightScheme::overlap(), opts).value;
  CHECK(ato_099 < ato_090);
  CHECK(ato_099 == Approx(1.0).epsilon(0.01));

  // Overlap <= observed <= treated at phi = 0.9.
  const double ipw_090 = a.value;
  const double att_090 = kappa_de_monte_carlo(0.5, 0.90, WeightScheme::treated(), opts).value;
  CHECK(ato_090 <= ipw_090);
  CHECK(ipw_090 <= att_090);

  opts.n_draws = 100;
  CHECK_THROWS_AS(kappa_de_monte_carlo(0.5, 0.9, ipw, opts), Error);
}

TEST_CASE("Monte Carlo IPW design effect agrees with the closed form") {
  KappaOptions opts;  // 1e6 draws, default seed
  for (double phi : {0.85, 0.90, 0.95}) {
    const auto beta = solve_ab(0.5, phi);
    const KappaEstimate k = kappa_de_monte_carlo(0.5, phi, WeightScheme::ipw(0.5), opts);
    const double exact = kappa_ipw_analytic(0.5, beta.a, beta.b);
    CAPTURE(phi);
    CAPTURE(k.value);
    CAPTURE(k.mc_std_error);
    CAPTURE(exact);
    CHECK(std::abs(k.value - exact) < 3 * k.mc_std_error);
  }
}
