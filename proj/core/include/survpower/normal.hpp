#pragma once

namespace survpower {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile z_p, p in (0, 1).
double normal_quantile(double p);

enum class Sides { kOne = 1, kTwo = 2 };

/// z_{1 - alpha'} with alpha' = alpha (one-sided) or alpha / 2 (two-sided).
double critical_value(double alpha, Sides sides);

}  // namespace survpower
