#include "survpower/overlap.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <sstream>

#include "survpower/error.hpp"

namespace survpower {

using detail::fail;

namespace {

// Gamma(x + 1/2) / (sqrt(x) Gamma(x)). tgamma_delta_ratio evaluates
// Gamma(x) / Gamma(x + 1/2) without forming either Gamma, so this neither
// overflows nor cancels for large x.
double half_shift_ratio(double x) {
  return 1.0 / (std::sqrt(x) * boost::math::tgamma_delta_ratio(x, 0.5));
}

constexpr int kMaxBracketDoublings = 80;
constexpr int kMaxBisections = 400;
constexpr double kPhiTolerance = 1e-10;

}  // namespace

double phi_from_ab(double a, double b) {
  if (!(a > 0.0 && b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    fail(ErrorCode::kDomain, "Beta shapes must be positive and finite", "a");
  }
  return half_shift_ratio(a) * half_shift_ratio(b);
}

BetaOverlap beta_from_shapes(double a, double b) {
  return {a, b, a / (a + b), phi_from_ab(a, b)};
}

BetaOverlap solve_ab(double r, double phi) {
  detail::require_open_unit(r, "r");
  detail::require_open_unit(phi, "phi");
  const double ratio = (1.0 - r) / r;
  const auto phi_at = [ratio](double a) { return phi_from_ab(a, a * ratio); };

  // phi(a) -> 0 as a -> 0 and -> 1 as a -> infinity, increasing in between.
  double lo = std::numeric_limits<double>::min();
  double hi = 2.0;
  for (int i = 0; phi_at(hi) < phi; ++i) {
    if (i == kMaxBracketDoublings) {
      fail(ErrorCode::kConvergence, "could not bracket the Beta shape for this phi", "phi");
    }
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < kMaxBisections; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || hi - lo <= 1e-12 * hi) break;
    (phi_at(mid) < phi ? lo : hi) = mid;
  }
  const double a = 0.5 * (lo + hi);
  const BetaOverlap out = beta_from_shapes(a, a * ratio);
  if (std::abs(out.phi - phi) > kPhiTolerance) {
    std::ostringstream msg;
    msg << "bisection for (a, b) stopped at |phi - target| = " << std::abs(out.phi - phi);
    fail(ErrorCode::kConvergence, msg.str(), "phi");
  }
  return out;
}

double min_phi_for_finite_variance(double r) {
  detail::require_open_unit(r, "r");
  // On b = a (1 - r) / r the smaller shape is a when r <= 1/2.
  if (r <= 0.5) return phi_from_ab(1.0, (1.0 - r) / r);
  return phi_from_ab(r / (1.0 - r), 1.0);
}

BetaMoments::BetaMoments(const BetaOverlap& beta) : a_(beta.a), b_(beta.b), r_(beta.r) {
  if (!(a_ > 0.0 && b_ > 0.0)) fail(ErrorCode::kDomain, "Beta shapes must be positive", "a");
}

double BetaMoments::mean_inv_e() const {
  if (!(a_ > 1.0)) fail(ErrorCode::kExistence, "E[1/e] requires a > 1", "a");
  return (a_ + b_ - 1.0) / (a_ - 1.0);
}

double BetaMoments::mean_inv_1me() const {
  if (!(b_ > 1.0)) fail(ErrorCode::kExistence, "E[1/(1-e)] requires b > 1", "b");
  return (a_ + b_ - 1.0) / (b_ - 1.0);
}

double BetaMoments::var_w1() const {
  if (!(a_ > 2.0)) fail(ErrorCode::kExistence, "Var[w1] requires a > 2", "a");
  return r_ * r_ * b_ * (a_ + b_ - 1.0) / ((a_ - 1.0) * (a_ - 1.0) * (a_ - 2.0));
}

double BetaMoments::var_w0() const {
  if (!(b_ > 2.0)) fail(ErrorCode::kExistence, "Var[w0] requires b > 2", "b");
  const double q = 1.0 - r_;
  return q * q * a_ * (a_ + b_ - 1.0) / ((b_ - 1.0) * (b_ - 1.0) * (b_ - 2.0));
}

double BetaMoments::r_squared() const { return 1.0 / (a_ + b_ + 1.0); }

OverlapCategory overlap_category(double phi) {
  if (phi < 0.8) return OverlapCategory::kVeryPoor;
  if (phi < 0.9) return OverlapCategory::kPoor;
  if (phi < 0.95) return OverlapCategory::kModerate;
  return OverlapCategory::kGood;
}

std::string_view to_string(OverlapCategory category) {
  switch (category) {
    case OverlapCategory::kVeryPoor: return "very poor";
    case OverlapCategory::kPoor: return "poor";
    case OverlapCategory::kModerate: return "moderate";
    case OverlapCategory::kGood: return "good";
  }
  return "unknown";
}

}  // namespace survpower
