#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace scout::stats {

class StatsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double mean(std::span<const double> x);
/// Divides by n.
double population_sd(std::span<const double> x);
/// Divides by n - 1.
double sample_sd(std::span<const double> x);
double weighted_mean(std::span<const double> x, std::span<const double> w);

/// Sample Pearson correlation; throws on unequal lengths, n < 2 or zero variance.
double pearson(std::span<const double> x, std::span<const double> y);
std::optional<double> try_pearson(std::span<const double> x, std::span<const double> y);

/// Linear-interpolation quantile (Hyndman-Fan type 7), q in [0, 1].
double quantile(std::span<const double> x, double q);
double quantile_sorted(std::span<const double> sorted, double q);

/// Rounds half away from zero to the nearest multiple of `step`.
double round_to_multiple(double x, double step);

}  // namespace scout::stats
