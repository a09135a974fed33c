#include "scout/stats/bootstrap.hpp"

#include <algorithm>
#include <limits>

#include "scout/stats/descriptive.hpp"

namespace scout::stats {

std::vector<std::size_t> resample_indices(std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = rng.index(n);
  return idx;
}

std::pair<double, double> percentile_ci(std::vector<double> values, double level) {
  if (values.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan};
  }
  std::sort(values.begin(), values.end());
  const double a = (1.0 - level) / 2.0;
  return {quantile_sorted(values, a), quantile_sorted(values, 1.0 - a)};
}

double bootstrap_p(const std::vector<double>& values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto le = std::count_if(values.begin(), values.end(), [](double v) { return v <= 0.0; });
  const auto ge = std::count_if(values.begin(), values.end(), [](double v) { return v >= 0.0; });
  const double n = static_cast<double>(values.size());
  return std::min(1.0, 2.0 * std::min(static_cast<double>(le), static_cast<double>(ge)) / n);
}

}  // namespace scout::stats
