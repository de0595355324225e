#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "survpower/error.hpp"
#include "survpower/normal.hpp"
#include "survpower/survival.hpp"

namespace survpower {

double kaplan_meier(std::span<const SubjectRecord> records, double at_time) {
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return records[a].time < records[b].time; });

  double at_risk = 0.0;
  for (const auto& rec : records) at_risk += rec.weight;

  double survival = 1.0;
  std::size_t i = 0;
  while (i < order.size() && records[order[i]].time <= at_time) {
    const double t = records[order[i]].time;
    double deaths = 0.0;
    double leaving = 0.0;
    for (; i < order.size() && records[order[i]].time == t; ++i) {
      const auto& rec = records[order[i]];
      if (rec.event == 1) deaths += rec.weight;
      leaving += rec.weight;
    }
    if (deaths > 0.0 && at_risk > 0.0) survival *= 1.0 - deaths / at_risk;
    at_risk -= leaving;
  }
  return survival;
}

Alternative protective_direction(double tau0) {
  return tau0 < 0.0 ? Alternative::kLess : Alternative::kGreater;
}

WaldResult wald_test(double tau_hat, double se, double null_tau, double alpha,
                     Alternative alternative) {
  if (!(se > 0.0)) detail::fail(ErrorCode::kDomain, "standard error must be positive", "se");
  WaldResult out;
  out.statistic = (tau_hat - null_tau) / se;
  switch (alternative) {
    case Alternative::kLess:
      out.p_value = normal_cdf(out.statistic);
      out.reject = out.statistic < -critical_value(alpha, Sides::kOne);
      break;
    case Alternative::kGreater:
      out.p_value = normal_cdf(-out.statistic);
      out.reject = out.statistic > critical_value(alpha, Sides::kOne);
      break;
    case Alternative::kTwoSided:
      out.p_value = 2.0 * normal_cdf(-std::abs(out.statistic));
      out.reject = std::abs(out.statistic) > critical_value(alpha, Sides::kTwo);
      break;
  }
  return out;
}

}  // namespace survpower
