#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scout/stats/design.hpp"

namespace scout::stats {

struct RegressionResult {
  std::vector<std::string> names;
  std::vector<double> coef;
  std::vector<double> se;
  std::vector<double> t;
  std::vector<double> p;
  double r2 = 0.0;
  double sigma = 0.0;  // residual standard error
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t dropped = 0;

  [[nodiscard]] double df() const { return static_cast<double>(n) - static_cast<double>(k); }
  [[nodiscard]] std::optional<std::size_t> index(const std::string& name) const;
  /// Throws StatsError for unknown names.
  [[nodiscard]] std::size_t at(const std::string& name) const;
  /// t-based confidence interval.
  [[nodiscard]] std::pair<double, double> ci(std::size_t i, double level = 0.95) const;
  /// Normal-approximation interval coef ± z·SE.
  [[nodiscard]] std::pair<double, double> ci_normal(std::size_t i, double level = 0.95) const;
};

/// "***" for p < 0.01, "**" for p < 0.05, "*" for p < 0.1.
std::string stars(double p);

/// (Weighted) least squares through column-pivoted Householder QR of sqrt(W)X.
/// Classical homoskedastic standard errors with n - k degrees of freedom.
RegressionResult ols_fit(const Eigen::MatrixXd& x, const std::vector<std::string>& names, const Eigen::VectorXd& y,
                         std::span<const double> weights = {});
RegressionResult ols_fit(const DesignMatrix& design, const Eigen::VectorXd& y, std::span<const double> weights = {});

/// coef · sd_x / sd_y; throws on zero sd_x or sd_y.
double standardized_coef(double coef, double sd_x, double sd_y);
/// Per-coefficient standardized values using population SDs of the design
/// columns and response; NaN for the intercept.
std::vector<double> standardized_coefs(const RegressionResult& result, const DesignMatrix& design,
                                       const Eigen::VectorXd& y);

/// E-value for a risk ratio (RR < 1 is inverted).
double e_value_rr(double rr);
/// E-value of a continuous-outcome coefficient: RR = exp(0.91 · |coef| / sd_outcome).
double e_value(double coef, double sd_outcome);

}  // namespace scout::stats
