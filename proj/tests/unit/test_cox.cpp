#include <doctest.h>

#include <cmath>
#include <vector>

#include "survpower/error.hpp"
#include "survpower/random.hpp"
#include "survpower/survival.hpp"
#include "toy_data.hpp"

using namespace survpower;
using doctest::Approx;

TEST_CASE("fit matches the brute-force partial-likelihood maximizer") {
  for (const auto& d : toy::datasets()) {
    CAPTURE(d.name);
    const CoxFit fit = fit_weighted_cox(d.view());
    CHECK(fit.converged);
    CHECK(std::abs(fit.tau_hat - toy::grid_argmax(d)) < 1e-5);
    CHECK(std::abs(fit.score) < 1e-8);
    CHECK(fit.information > 0.0);
    CHECK(std::abs(cox_score(d.view(), fit.tau_hat).score) < 1e-8);
  }
}

TEST_CASE("robust variance matches the direct transcriptions") {
  for (const auto& d : toy::datasets()) {
    CAPTURE(d.name);
    const CoxFit fit = fit_weighted_cox(d.view());
    const double direct = toy::sandwich_variance_direct(d, fit.tau_hat);
    CHECK(std::abs(robust_variance(d.view(), fit.tau_hat) - direct) < 1e-10);
    CHECK(fit.robust_se == Approx(std::sqrt(direct)).epsilon(1e-10));
    // Also away from the maximizer.
    CHECK(std::abs(robust_variance(d.view(), 0.3) - toy::sandwich_variance_direct(d, 0.3)) < 1e-10);

    toy::Dataset unit = d;
    std::fill(unit.weight.begin(), unit.weight.end(), 1.0);
    const CoxFit uf = fit_weighted_cox(unit.view());
    CHECK(std::abs(robust_variance(unit.view(), uf.tau_hat) -
                   toy::lin_wei_variance(unit, uf.tau_hat)) < 1e-10);
  }
}

TEST_CASE("identical arms give a null estimate") {
  toy::Dataset d{"mirror", {1, 2, 4, 1, 2, 4}, {1, 1, 0, 1, 1, 0}, {1, 1, 1, 0, 0, 0},
                 {1, 1, 1, 1, 1, 1}};
  CHECK(std::abs(fit_weighted_cox(d.view()).tau_hat) < 1e-12);
}

TEST_CASE("weight rescaling and duplication leave the fit unchanged") {
  for (const auto& d : toy::datasets()) {
    CAPTURE(d.name);
    const CoxFit base = fit_weighted_cox(d.view());

    toy::Dataset uniform = d;
    for (auto& w : uniform.weight) w *= 5.0;
    const CoxFit u = fit_weighted_cox(uniform.view());
    CHECK(std::abs(u.tau_hat - base.tau_hat) < 1e-10);
    CHECK(std::abs(u.robust_se - base.robust_se) < 1e-10);

    toy::Dataset dup = d;
    dup.weight.clear();
    for (double w : d.weight) dup.weight.push_back(w / 2);
    for (std::size_t i = 0; i < d.time.size(); ++i) {
      dup.time.push_back(d.time[i]);
      dup.event.push_back(d.event[i]);
      dup.z.push_back(d.z[i]);
      dup.weight.push_back(d.weight[i] / 2);
    }
    CHECK(std::abs(fit_weighted_cox(dup.view()).tau_hat - base.tau_hat) < 1e-10);

    toy::Dataset rep = d;
    for (int k = 0; k < 3; ++k)
      for (std::size_t i = 0; i < d.time.size(); ++i) {
        rep.time.push_back(d.time[i]);
        rep.event.push_back(d.event[i]);
        rep.z.push_back(d.z[i]);
        rep.weight.push_back(d.weight[i]);
      }
    const CoxFit r4 = fit_weighted_cox(rep.view());
    CHECK(std::abs(r4.tau_hat - base.tau_hat) < 1e-10);
    CHECK(std::abs(r4.robust_se - base.robust_se / 2.0) < 1e-8);
  }
}

TEST_CASE("Newton information stays positive along the path") {
  for (const auto& d : toy::datasets())
    for (double t = -5; t <= 5; t += 0.25) CHECK(cox_score(d.view(), t).information > 0.0);
}

TEST_CASE("degenerate and separated data") {
  auto code = [](const toy::Dataset& d) {
    try {
      fit_weighted_cox(d.view());
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kValidation;
  };
  // All treated events precede all controls: likelihood increases without bound.
  toy::Dataset sep{"separated", {1, 2, 3, 4}, {1, 1, 1, 1}, {1, 1, 0, 0}, {1, 1, 1, 1}};
  CHECK(code(sep) == ErrorCode::kSeparation);
  toy::Dataset one_arm{"one-arm", {1, 2, 3}, {1, 1, 0}, {1, 1, 1}, {1, 1, 1}};
  CHECK(code(one_arm) == ErrorCode::kDegenerate);
  toy::Dataset no_events{"none", {1, 2, 3}, {0, 0, 0}, {1, 0, 1}, {1, 1, 1}};
  CHECK(code(no_events) == ErrorCode::kDegenerate);
}

TEST_CASE("record and column entry points agree") {
  const auto d = toy::datasets()[1];
  std::vector<SubjectRecord> records;
  for (std::size_t i = 0; i < d.time.size(); ++i)
    records.push_back({d.time[i], d.event[i], d.z[i], {}, d.weight[i]});
  const CoxFit a = fit_weighted_cox(records);
  const CoxFit b = fit_weighted_cox(d.view());
  CHECK(a.tau_hat == b.tau_hat);
  CHECK(robust_variance(records, a.tau_hat) == robust_variance(d.view(), a.tau_hat));
}

TEST_CASE("robust interval covers the truth at nominal rate") {
  const double tau0 = std::log(0.6);
  const int n = 200;
  const int reps = 1000;
  int covered = 0;
  std::vector<double> time(n), weight(n, 1.0);
  std::vector<int> event(n), z(n);
  for (int k = 0; k < reps; ++k) {
    Rng rng = Rng::stream(2024, static_cast<std::uint64_t>(k));
    for (int i = 0; i < n; ++i) {
      z[i] = i < n / 2 ? 1 : 0;
      const double t = rng.exponential() / (0.5 * std::exp(tau0 * z[i]));
      const double c = rng.exponential() / 0.3;
      time[i] = std::min(t, c);
      event[i] = t <= c ? 1 : 0;
    }
    const CoxFit fit = fit_weighted_cox(CoxSample{time, event, z, weight});
    if (std::abs(fit.tau_hat - tau0) <= 1.959963984540054 * fit.robust_se) ++covered;
  }
  const double coverage = static_cast<double>(covered) / reps;
  CAPTURE(coverage);
  CHECK(coverage >= 0.93);
  CHECK(coverage <= 0.97);
}
