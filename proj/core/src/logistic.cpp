#include <Eigen/Dense>
#include <cmath>

#include "survpower/error.hpp"
#include "survpower/survival.hpp"

namespace survpower {

using detail::fail;

namespace {

constexpr int kMaxIterations = 100;
constexpr double kGradientTolerance = 1e-8;
// A fitted probability this close to 0 or 1 only arises when the linear
// predictor is unbounded, i.e. the classes are (quasi-)separated.
constexpr double kSeparationMargin = 1e-7;
constexpr double kMaxLinearPredictor = 30.0;

}  // namespace

LogisticFit fit_logistic(std::span<const double> x, std::size_t p, std::span<const int> z) {
  const std::size_t n = z.size();
  if (x.size() != n * p) fail(ErrorCode::kValidation, "x must be n x p row-major", "x");
  const Eigen::Index cols = static_cast<Eigen::Index>(p + 1);

  Eigen::MatrixXd design(static_cast<Eigen::Index>(n), cols);
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  std::size_t treated = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    design(row, 0) = 1.0;
    for (std::size_t j = 0; j < p; ++j) design(row, static_cast<Eigen::Index>(j + 1)) = x[i * p + j];
    if (z[i] != 0 && z[i] != 1) fail(ErrorCode::kValidation, "z must be 0 or 1", "z");
    y(row) = z[i];
    treated += static_cast<std::size_t>(z[i]);
  }
  if (treated == 0 || treated == n) {
    fail(ErrorCode::kDegenerate, "propensity model needs both treated and control units", "z");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < cols) {
    fail(ErrorCode::kDegenerate, "propensity design matrix is rank deficient", "x");
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(cols);
  Eigen::VectorXd mu(static_cast<Eigen::Index>(n));
  LogisticFit fit;
  bool converged = false;
  for (int iter = 1; iter <= kMaxIterations; ++iter) {
    fit.iterations = iter;
    const Eigen::VectorXd eta = design * beta;
    if (eta.cwiseAbs().maxCoeff() > kMaxLinearPredictor) {
      fail(ErrorCode::kSeparation, "propensity model separates the arms", "x");
    }
    mu = (1.0 + (-eta.array()).exp()).inverse().matrix();
    const Eigen::VectorXd gradient = design.transpose() * (y - mu);
    if (gradient.cwiseAbs().maxCoeff() < kGradientTolerance) {
      converged = true;
      break;
    }
    const Eigen::VectorXd w = (mu.array() * (1.0 - mu.array())).matrix();
    const Eigen::MatrixXd hessian = design.transpose() * w.asDiagonal() * design;
    beta += hessian.ldlt().solve(gradient);
  }
  if (!converged) fail(ErrorCode::kSeparation, "propensity model did not converge", "x");
  if (mu.minCoeff() < kSeparationMargin || mu.maxCoeff() > 1.0 - kSeparationMargin) {
    fail(ErrorCode::kSeparation, "propensity model separates the arms", "x");
  }

  fit.coefficients.assign(beta.data(), beta.data() + beta.size());
  fit.fitted.assign(mu.data(), mu.data() + mu.size());
  return fit;
}

LogisticFit fit_logistic_ps(std::span<const SubjectRecord> records) {
  if (records.empty()) fail(ErrorCode::kDegenerate, "no records", "z");
  const std::size_t p = records.front().x.size();
  std::vector<double> x;
  std::vector<int> z;
  x.reserve(records.size() * p);
  z.reserve(records.size());
  for (const auto& rec : records) {
    if (rec.x.size() != p) fail(ErrorCode::kValidation, "covariate dimension varies", "x");
    x.insert(x.end(), rec.x.begin(), rec.x.end());
    z.push_back(rec.z);
  }
  return fit_logistic(x, p, z);
}

}  // namespace survpower
