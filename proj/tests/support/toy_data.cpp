#include "toy_data.hpp"

#include <cmath>

namespace toy {

std::vector<Dataset> datasets() {
  return {
      {"four-uncensored", {1, 2, 3, 4}, {1, 1, 1, 1}, {0, 1, 0, 1}, {1, 1, 1, 1}},
      {"censored-weighted",
       {0.5, 1.2, 1.2, 2.0, 2.7, 3.1, 3.1, 4.4, 5.0, 6.3},
       {1, 1, 0, 1, 1, 0, 1, 1, 0, 1},
       {1, 0, 1, 0, 1, 1, 0, 0, 1, 0},
       {1.3, 0.7, 2.1, 1.0, 0.4, 1.8, 0.9, 1.2, 0.6, 1.5}},
      {"ties-uneven",
       {1, 1, 1, 2, 2, 3, 3, 3, 4, 5, 5, 6},
       {1, 1, 0, 1, 0, 1, 1, 1, 0, 1, 1, 0},
       {0, 1, 1, 0, 1, 1, 0, 1, 0, 1, 0, 1},
       {0.25, 3.0, 1.0, 1.5, 0.8, 2.2, 0.6, 1.1, 4.0, 0.9, 1.7, 0.3}},
  };
}

double log_partial_likelihood(const Dataset& d, double tau) {
  double ll = 0.0;
  const std::size_t n = d.time.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!d.event[i]) continue;
    double risk = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (d.time[j] >= d.time[i]) risk += d.weight[j] * std::exp(tau * d.z[j]);
    ll += d.weight[i] * (tau * d.z[i] - std::log(risk));
  }
  return ll;
}

double grid_argmax(const Dataset& d) {
  double best = -10.0;
  double best_ll = log_partial_likelihood(d, best);
  for (double t = -10.0; t <= 10.0; t += 1e-3) {
    const double ll = log_partial_likelihood(d, t);
    if (ll > best_ll) {
      best_ll = ll;
      best = t;
    }
  }
  const double center = best;
  for (long k = -2000; k <= 2000; ++k) {
    const double t = center + 1e-6 * static_cast<double>(k);
    const double ll = log_partial_likelihood(d, t);
    if (ll > best_ll) {
      best_ll = ll;
      best = t;
    }
  }
  return best;
}

namespace {

struct RiskAverages {
  double s0;
  double zbar;
};

RiskAverages at(const Dataset& d, double tau, double t) {
  double s0 = 0.0, s1 = 0.0;
  for (std::size_t k = 0; k < d.time.size(); ++k) {
    if (d.time[k] < t) continue;
    const double r = d.weight[k] * std::exp(tau * d.z[k]);
    s0 += r;
    s1 += r * d.z[k];
  }
  return {s0, s1 / s0};
}

}  // namespace

double sandwich_variance_direct(const Dataset& d, double tau) {
  const std::size_t n = d.time.size();
  double info = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!d.event[i]) continue;
    const RiskAverages ra = at(d, tau, d.time[i]);
    info += d.weight[i] * ra.zbar * (1.0 - ra.zbar);
  }
  double meat = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double eta = 0.0;
    if (d.event[i]) eta += d.weight[i] * (d.z[i] - at(d, tau, d.time[i]).zbar);
    for (std::size_t j = 0; j < n; ++j) {
      if (!d.event[j] || d.time[i] < d.time[j]) continue;
      const RiskAverages ra = at(d, tau, d.time[j]);
      eta -= d.weight[j] * d.weight[i] * std::exp(tau * d.z[i]) / ra.s0 * (d.z[i] - ra.zbar);
    }
    meat += eta * eta;
  }
  return meat / (info * info);
}

double lin_wei_variance(const Dataset& d, double tau) {
  const std::size_t n = d.time.size();
  std::vector<double> w(n, 0.0);
  double info = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!d.event[j]) continue;
    // Risk-set moments at the j-th event time with unit weights.
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      if (d.time[k] >= d.time[j]) {
        s0 += std::exp(tau * d.z[k]);
        s1 += d.z[k] * std::exp(tau * d.z[k]);
      }
    const double zbar = s1 / s0;
    info += zbar - zbar * zbar;
    w[j] += d.z[j] - zbar;
    for (std::size_t i = 0; i < n; ++i)
      if (d.time[i] >= d.time[j]) w[i] -= std::exp(tau * d.z[i]) / s0 * (d.z[i] - zbar);
  }
  double b = 0.0;
  for (double v : w) b += v * v;
  return b / (info * info);
}

}  // namespace toy
