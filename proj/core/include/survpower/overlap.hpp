#pragma once

// Beta approximation of the propensity-score distribution.
//
// A design is summarized by the treated proportion r and the overlap
// coefficient phi (the Bhattacharyya coefficient between the propensity
// densities of the two arms). With e ~ Beta(a, b):
//
//   r   = a / (a + b)
//   phi = g(a) g(b),   g(x) = Gamma(x + 1/2) / (sqrt(x) Gamma(x))
//
// and the map (r, phi) <-> (a, b) is a bijection on (0, 1)^2 x (0, inf)^2.

#include <string_view>

namespace survpower {

struct BetaOverlap {
  double a = 1.0;
  double b = 1.0;
  double r = 0.5;
  double phi = 0.0;
};

/// Builds a BetaOverlap from shapes, filling r and phi.
BetaOverlap beta_from_shapes(double a, double b);

/// Overlap coefficient of Beta(a, b); a, b > 0.
double phi_from_ab(double a, double b);

/// Solves for (a, b) on the line b = a (1 - r) / r by bisection on a.
/// phi == 1 is rejected (a -> infinity); use the randomized-trial formulas.
BetaOverlap solve_ab(double r, double phi);

/// Smallest phi at which a > 1 and b > 1 (finite IPW variance).
double min_phi_for_finite_variance(double r);

/// Moments of the Beta propensity model used by the variance formulas.
/// Accessors throw Error(kExistence) when the moment does not exist.
class BetaMoments {
 public:
  explicit BetaMoments(const BetaOverlap& beta);

  double mean_inv_e() const;    // E[1/e], a > 1
  double mean_inv_1me() const;  // E[1/(1-e)], b > 1
  double var_w1() const;        // Var[r/e], a > 2
  double var_w0() const;        // Var[(1-r)/(1-e)], b > 2
  double r_squared() const;     // Var[e] / Var[Z] = 1 / (a + b + 1)

 private:
  double a_;
  double b_;
  double r_;
};

inline BetaMoments beta_moments(const BetaOverlap& beta) { return BetaMoments(beta); }

enum class OverlapCategory { kVeryPoor, kPoor, kModerate, kGood };

/// Rule of thumb: < 0.8 very poor, [0.8, 0.9) poor, [0.9, 0.95) moderate, >= 0.95 good.
OverlapCategory overlap_category(double phi);

std::string_view to_string(OverlapCategory category);

}  // namespace survpower
