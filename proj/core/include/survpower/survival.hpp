#pragma once

// Estimation machinery for the marginal Cox model with treatment as the only
// covariate: weighted partial-likelihood fitting (Breslow ties), the
// Binder / Lin-Wei robust sandwich variance, logistic propensity scores,
// Kaplan-Meier, and the Wald test.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace survpower {

struct SubjectRecord {
  double time = 0.0;
  int event = 0;  // 1 = event, 0 = censored
  int z = 0;      // 1 = treated
  std::vector<double> x;
  double weight = 1.0;
};

/// Column view of the data a Cox fit needs. All spans share one length.
struct CoxSample {
  std::span<const double> time;
  std::span<const int> event;
  std::span<const int> z;
  std::span<const double> weight;
};

struct CoxOptions {
  double score_tolerance = 1e-10;  // relative to max(1, total event weight)
  int max_iterations = 50;
  double divergence_cutoff = 20.0;  // |tau| beyond this flags a monotone likelihood
};

struct CoxFit {
  double tau_hat = 0.0;
  double robust_se = 0.0;
  double naive_se = 0.0;
  double score = 0.0;        // weighted score at tau_hat
  double information = 0.0;  // A_n at tau_hat
  int iterations = 0;
  bool converged = false;
};

/// Newton iterations from tau = 0 with step halving. Throws kSeparation when
/// tau diverges past the cutoff, kDegenerate when no event has both arms in
/// its risk set, kConvergence after max_iterations.
CoxFit fit_weighted_cox(const CoxSample& sample, const CoxOptions& options = {});
CoxFit fit_weighted_cox(std::span<const SubjectRecord> records, const CoxOptions& options = {});

/// Weighted score U(tau) and information A(tau).
struct CoxScore {
  double score = 0.0;
  double information = 0.0;
};
CoxScore cox_score(const CoxSample& sample, double tau);

/// Sandwich variance A^{-2} sum eta_i^2 with eta_i the weighted empirical
/// influence (event term minus the compensator integral). Throws kDegenerate
/// when A <= 0.
double robust_variance(const CoxSample& sample, double tau_hat);
double robust_variance(std::span<const SubjectRecord> records, double tau_hat);

struct LogisticFit {
  std::vector<double> coefficients;  // intercept first
  std::vector<double> fitted;        // e_i in (0, 1)
  int iterations = 0;
};

/// Logistic regression of z on [1, x] by iteratively reweighted least
/// squares, stopping when the gradient max-norm is below 1e-8. `x` is
/// row-major n x p. Throws kSeparation on (quasi-)separation, kDegenerate when
/// the design is rank deficient or only one class is present.
LogisticFit fit_logistic(std::span<const double> x, std::size_t p, std::span<const int> z);
LogisticFit fit_logistic_ps(std::span<const SubjectRecord> records);

/// Weighted product-limit survival at `at_time` (right-continuous).
double kaplan_meier(std::span<const SubjectRecord> records, double at_time);

enum class Alternative {
  kLess,     // protective: reject for small statistics
  kGreater,
  kTwoSided,
};

/// kLess when tau0 < 0, kGreater otherwise.
Alternative protective_direction(double tau0);

struct WaldResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool reject = false;
};

WaldResult wald_test(double tau_hat, double se, double null_tau, double alpha,
                     Alternative alternative = Alternative::kLess);

/// Reads records from CSV with a header naming `time`, `event`, `z`,
/// covariates `x1..xp` and an optional `weight` column.
std::vector<SubjectRecord> read_subject_records_csv(std::istream& in);

/// Columnar copy of records for the CoxSample view.
struct CoxColumns {
  std::vector<double> time;
  std::vector<int> event;
  std::vector<int> z;
  std::vector<double> weight;

  explicit CoxColumns(std::span<const SubjectRecord> records);
  CoxSample view() const { return {time, event, z, weight}; }
};

}  // namespace survpower
