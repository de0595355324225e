#include "survpower/normal.hpp"

#include <boost/math/distributions/normal.hpp>

#include "survpower/error.hpp"

namespace survpower {

namespace {
const boost::math::normal_distribution<double> kStandardNormal{0.0, 1.0};
}

double normal_cdf(double x) {
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  if (x == std::numeric_limits<double>::infinity()) return 1.0;
  return boost::math::cdf(kStandardNormal, x);
}

double normal_quantile(double p) {
  detail::require_open_unit(p, "p");
  return boost::math::quantile(kStandardNormal, p);
}

double critical_value(double alpha, Sides sides) {
  detail::require_open_unit(alpha, "alpha");
  const double tail = sides == Sides::kTwo ? alpha / 2.0 : alpha;
  return boost::math::quantile(boost::math::complement(kStandardNormal, tail));
}

}  // namespace survpower
