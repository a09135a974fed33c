#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scout/stats/descriptive.hpp"

namespace scout::stats {

class SeparationError : public StatsError {
 public:
  using StatsError::StatsError;
};

inline constexpr double kProbClip = 1e-6;

/// Clips to [1e-6, 1 - 1e-6].
double clip_probability(double p);

struct LogisticModel {
  std::vector<std::string> names;
  Eigen::VectorXd coef;
  int iterations = 0;
  double deviance = 0.0;

  /// Unclipped fitted probabilities.
  [[nodiscard]] Eigen::VectorXd predict_raw(const Eigen::MatrixXd& x) const;
  /// Probabilities clipped for downstream weighting.
  [[nodiscard]] Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;
};

/// Maximum likelihood by IRLS; stops when the largest coefficient step is
/// below 1e-8, fails after 100 iterations or on diverging linear predictors.
/// `ridge` > 0 adds the penalty ridge/2 * |beta|^2 over non-intercept
/// coefficients, which keeps the estimate finite under separation.
LogisticModel logistic_fit(const Eigen::MatrixXd& x, const std::vector<std::string>& names,
                           std::span<const double> labels, std::span<const double> weights = {},
                           double ridge = 0.0);

inline constexpr double kPropensityRidge = 1.0;

/// Propensity model: plain maximum likelihood, refit with ridge
/// kPropensityRidge when the data are separated. Sets `*penalized` accordingly.
LogisticModel propensity_fit(const Eigen::MatrixXd& x, const std::vector<std::string>& names,
                             std::span<const double> labels, bool* penalized = nullptr);

struct Stump {
  Eigen::Index feature = 0;
  double threshold = 0.0;  // x <= threshold goes left
  double left = 0.0;
  double right = 0.0;
};

struct BoostedModel {
  double base = 0.0;  // initial log-odds
  std::vector<Stump> stumps;
  std::vector<double> deviance;  // training deviance after 0..trees stumps

  [[nodiscard]] Eigen::VectorXd log_odds(const Eigen::MatrixXd& x) const;
  [[nodiscard]] Eigen::VectorXd predict_raw(const Eigen::MatrixXd& x) const;
  [[nodiscard]] Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;
};

/// Gradient boosting on Bernoulli deviance with depth-1 trees and Newton leaf
/// values. A stump that would raise training deviance has its step halved.
/// `seed` only breaks ties between equally good split candidates.
BoostedModel boosted_stumps_fit(const Eigen::MatrixXd& x, std::span<const double> labels, int trees,
                                double shrinkage, std::uint64_t seed, std::span<const double> weights = {});

/// Bernoulli deviance -2 sum w [y log p + (1-y) log(1-p)].
double bernoulli_deviance(std::span<const double> labels, const Eigen::VectorXd& p,
                          std::span<const double> weights = {});

}  // namespace scout::stats
