#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "survpower/error.hpp"
#include "survpower/survival.hpp"

namespace survpower {

using detail::fail;

namespace {

// Risk sets for binary Z reduce to two running weight totals, so the data are
// collapsed once into one row per distinct event time and every evaluation of
// the score is linear in the number of event times.
struct EventTime {
  double time;
  double at_risk[2];      // weight at risk in each arm (T >= time)
  double event_weight;    // sum of w over events at this time
  double event_weight_z;  // sum of w z over events at this time
};

class RiskSets {
 public:
  explicit RiskSets(const CoxSample& s) {
    const std::size_t n = s.time.size();
    if (s.event.size() != n || s.z.size() != n || s.weight.size() != n) {
      fail(ErrorCode::kValidation, "Cox sample columns differ in length", "time");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return s.time[a] > s.time[b]; });

    double at_risk[2] = {0.0, 0.0};
    std::size_t i = 0;
    while (i < n) {
      const double t = s.time[order[i]];
      double ew = 0.0;
      double ewz = 0.0;
      for (; i < n && s.time[order[i]] == t; ++i) {
        const std::size_t k = order[i];
        const double w = s.weight[k];
        if (!(w >= 0.0) || !std::isfinite(w)) {
          fail(ErrorCode::kValidation, "weights must be finite and nonnegative", "weight");
        }
        if (s.z[k] != 0 && s.z[k] != 1) fail(ErrorCode::kValidation, "z must be 0 or 1", "z");
        if (!(s.time[k] >= 0.0)) fail(ErrorCode::kValidation, "time must be >= 0", "time");
        at_risk[s.z[k]] += w;
        if (s.event[k] == 1) {
          ew += w;
          ewz += w * s.z[k];
        }
      }
      if (ew > 0.0) events_.push_back({t, {at_risk[0], at_risk[1]}, ew, ewz});
    }
    std::reverse(events_.begin(), events_.end());  // ascending time
    for (const auto& e : events_) total_event_weight_ += e.event_weight;
  }

  const std::vector<EventTime>& events() const { return events_; }
  double total_event_weight() const { return total_event_weight_; }

  static double treated_share(const EventTime& e, double exp_tau) {
    const double s1 = e.at_risk[1] * exp_tau;
    return s1 / (e.at_risk[0] + s1);
  }

  CoxScore evaluate(double tau) const {
    const double exp_tau = std::exp(tau);
    CoxScore out;
    for (const auto& e : events_) {
      const double pi = treated_share(e, exp_tau);
      out.score += e.event_weight_z - e.event_weight * pi;
      out.information += e.event_weight * pi * (1.0 - pi);
    }
    return out;
  }

 private:
  std::vector<EventTime> events_;
  double total_event_weight_ = 0.0;
};

}  // namespace

CoxScore cox_score(const CoxSample& sample, double tau) { return RiskSets(sample).evaluate(tau); }

CoxFit fit_weighted_cox(const CoxSample& sample, const CoxOptions& options) {
  const RiskSets sets(sample);
  if (sets.events().empty()) fail(ErrorCode::kDegenerate, "no events with positive weight", "event");

  const double tol = options.score_tolerance * std::max(1.0, sets.total_event_weight());
  double tau = 0.0;
  CoxScore cur = sets.evaluate(tau);
  if (!(cur.information > 0.0)) {
    fail(ErrorCode::kDegenerate, "no event has both arms in its risk set", "z");
  }

  CoxFit fit;
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    fit.iterations = iter;
    if (std::abs(cur.score) <= tol) {
      fit.converged = true;
      break;
    }
    double step = cur.score / cur.information;
    double next_tau = tau + step;
    CoxScore next = sets.evaluate(next_tau);
    // The log partial likelihood is concave in tau, so halving restores descent.
    for (int h = 0; h < 60 && !(std::abs(next.score) < std::abs(cur.score)); ++h) {
      step /= 2.0;
      next_tau = tau + step;
      next = sets.evaluate(next_tau);
    }
    if (std::abs(next_tau) > options.divergence_cutoff) {
      fail(ErrorCode::kSeparation,
           "log hazard ratio diverges (monotone likelihood: events concentrated in one arm)",
           "event");
    }
    if (!(std::abs(next.score) < std::abs(cur.score))) {
      // Numerical floor: the score cannot be reduced further.
      fit.converged = std::abs(cur.score) <= 1e3 * tol;
      break;
    }
    tau = next_tau;
    cur = next;
    if (!(cur.information > 0.0)) {
      fail(ErrorCode::kSeparation, "information vanished; likelihood is monotone", "event");
    }
  }
  if (!fit.converged && std::abs(cur.score) <= tol) fit.converged = true;
  if (!fit.converged) {
    fail(ErrorCode::kConvergence, "Newton iterations did not converge", "time");
  }

  fit.tau_hat = tau;
  fit.score = cur.score;
  fit.information = cur.information;
  fit.naive_se = 1.0 / std::sqrt(cur.information);
  fit.robust_se = std::sqrt(robust_variance(sample, tau));
  return fit;
}

double robust_variance(const CoxSample& sample, double tau_hat) {
  const RiskSets sets(sample);
  const auto& events = sets.events();
  const double exp_tau = std::exp(tau_hat);

  // Cumulative Breslow increments dLambda = D / S0 and dLambda * pi over
  // event times, ascending.
  std::vector<double> times, cum_hazard, cum_hazard_pi, pi_at;
  times.reserve(events.size());
  double h0 = 0.0, h1 = 0.0, information = 0.0;
  for (const auto& e : events) {
    const double pi = RiskSets::treated_share(e, exp_tau);
    const double s0 = e.at_risk[0] + e.at_risk[1] * exp_tau;
    const double d_lambda = e.event_weight / s0;
    h0 += d_lambda;
    h1 += d_lambda * pi;
    information += e.event_weight * pi * (1.0 - pi);
    times.push_back(e.time);
    cum_hazard.push_back(h0);
    cum_hazard_pi.push_back(h1);
    pi_at.push_back(pi);
  }
  if (!(information > 0.0)) {
    fail(ErrorCode::kDegenerate, "singular information: no event has both arms at risk", "z");
  }

  double b = 0.0;
  const std::size_t n = sample.time.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = sample.time[i];
    const double w = sample.weight[i];
    const int z = sample.z[i];
    // Last event time <= t.
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    double eta = 0.0;
    if (it != times.begin()) {
      const std::size_t g = static_cast<std::size_t>(it - times.begin()) - 1;
      const double compensator = z * cum_hazard[g] - cum_hazard_pi[g];
      eta -= w * (z == 1 ? exp_tau : 1.0) * compensator;
      if (sample.event[i] == 1 && times[g] == t) eta += w * (z - pi_at[g]);
    }
    b += eta * eta;
  }
  return b / (information * information);
}

double robust_variance(std::span<const SubjectRecord> records, double tau_hat) {
  const CoxColumns cols(records);
  return robust_variance(cols.view(), tau_hat);
}

CoxFit fit_weighted_cox(std::span<const SubjectRecord> records, const CoxOptions& options) {
  const CoxColumns cols(records);
  return fit_weighted_cox(cols.view(), options);
}

CoxColumns::CoxColumns(std::span<const SubjectRecord> records) {
  time.reserve(records.size());
  event.reserve(records.size());
  z.reserve(records.size());
  weight.reserve(records.size());
  for (const auto& rec : records) {
    time.push_back(rec.time);
    event.push_back(rec.event);
    z.push_back(rec.z);
    weight.push_back(rec.weight);
  }
}

}  // namespace survpower
