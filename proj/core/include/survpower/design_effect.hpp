#pragma once

// Balancing weights and the Kish design effect as a variance inflation
// factor relative to the randomized-trial variance.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>

namespace survpower {

enum class WeightKind { kIpw, kOverlap, kTreated, kCustom };

std::string_view to_string(WeightKind kind);

/// Arm-specific weight functions w1(e) (treated) and w0(e) (control).
class WeightScheme {
 public:
  using Fn = std::function<double(double)>;

  /// Normalized inverse probability weights: w1 = r / e, w0 = (1 - r) / (1 - e).
  static WeightScheme ipw(double r);
  /// Overlap weights: w1 = 1 - e, w0 = e.
  static WeightScheme overlap();
  /// Treated-population weights: w1 = 1, w0 = e / (1 - e).
  static WeightScheme treated();
  /// Arbitrary functions of the propensity score alone.
  static WeightScheme custom(Fn w1, Fn w0);
  /// IPW / overlap / treated by kind; r is used only for IPW normalization.
  static WeightScheme of_kind(WeightKind kind, double r);

  WeightKind kind() const { return kind_; }
  double treated_weight(double e) const { return w1_(e); }
  double control_weight(double e) const { return w0_(e); }
  double weight(int z, double e) const { return z == 1 ? w1_(e) : w0_(e); }

 private:
  WeightScheme(WeightKind kind, Fn w1, Fn w0);

  WeightKind kind_;
  Fn w1_;
  Fn w0_;
};

/// Finite-sample Kish design effect
///   (1/n1 + 1/n0)^{-1} [ sum Z w^2 / (sum Z w)^2 + sum (1-Z) w^2 / (sum (1-Z) w)^2 ].
/// Throws kDegenerate if an arm is empty or has zero total weight.
double kish_design_effect(std::span<const int> z, std::span<const double> w);

struct KappaEstimate {
  double value = 0.0;
  double mc_std_error = 0.0;  // batch means over kKappaBatches batches
  std::int64_t n_draws = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::int64_t kDefaultKappaDraws = 1'000'000;
inline constexpr std::int64_t kMinKappaDraws = 10'000;
inline constexpr int kKappaBatches = 100;

struct KappaOptions {
  std::int64_t n_draws = kDefaultKappaDraws;
  std::uint64_t seed = 20240601;
  std::optional<double> weight_cap;  // truncate weights above this value; off by default
};

/// Monte Carlo population design effect under e ~ Beta(a, b) solved from (r, phi):
/// draw e_i, Z_i ~ Bernoulli(e_i), w_i = Z_i w1(e_i) + (1 - Z_i) w0(e_i), then
/// evaluate the Kish design effect over all draws. Draw i consumes, in order,
/// the Beta variate and one uniform for Z_i from a single mt19937_64 stream.
KappaEstimate kappa_de_monte_carlo(double r, double phi, const WeightScheme& scheme,
                                   const KappaOptions& options = {});

/// Population design effect of normalized IPW weights:
/// r (1 - r) (a + b - 1) [1/(a - 1) + 1/(b - 1)].
double kappa_ipw_analytic(double r, double a, double b);

/// v_obs / v_rct in closed form.
double vif_analytic_ratio(double r, double tau0, double d1, double d0, double a, double b);

/// kappa_ipw_analytic - vif_analytic_ratio in closed form; zero when r = 1/2.
double kappa_discrepancy(double r, double tau0, double d1, double d0, double a, double b);

/// ceil(kappa * n_rct_raw), with n_rct_raw the unrounded randomized-trial size.
std::int64_t sample_size_with_vif(double n_rct_raw, double kappa);

}  // namespace survpower
