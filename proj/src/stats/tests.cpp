#include "scout/stats/tests.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "scout/stats/descriptive.hpp"

namespace scout::stats {

double normal_quantile(double p) { return boost::math::quantile(boost::math::normal_distribution<double>{}, p); }

double t_quantile(double p, double df) {
  if (!(df > 0)) return std::numeric_limits<double>::quiet_NaN();
  return boost::math::quantile(boost::math::students_t_distribution<double>{df}, p);
}

double t_two_sided_p(double t, double df) {
  if (std::isnan(t) || !(df > 0)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  const boost::math::students_t_distribution<double> dist{df};
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))), 0.0, 1.0);
}

double normal_two_sided_p(double z) {
  if (std::isnan(z)) return z;
  if (std::isinf(z)) return 0.0;
  const boost::math::normal_distribution<double> dist{};
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(z))), 0.0, 1.0);
}

double chi2_sf(double x, double df) {
  if (x <= 0.0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>{df}, x));
}

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  constexpr double pi = std::numbers::pi;
  if (lambda < 1.18) {
    // Small-lambda form: P(K <= l) = sqrt(2 pi)/l sum_{k odd} exp(-k^2 pi^2 / (8 l^2)).
    double s = 0.0;
    for (int k = 1; k < 200; k += 2) {
      const double term = std::exp(-k * k * pi * pi / (8.0 * lambda * lambda));
      s += term;
      if (term < 1e-300) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 == 1 ? 1.0 : -1.0) * term;
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

TestResult ks_two_sample(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw StatsError("K-S test needs nonempty samples");
  std::vector<double> a(x.begin(), x.end()), b(y.begin(), y.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  TestResult r;
  r.statistic = d;
  r.p = d == 0.0 ? 1.0 : kolmogorov_sf(std::sqrt(na * nb / (na + nb)) * d);
  return r;
}

TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
  std::size_t k = 0;
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) continue;
    ++k;
    for (double v : groups[g]) all.emplace_back(v, g);
  }
  if (k < 2) throw StatsError("Kruskal-Wallis needs at least two nonempty groups");
  std::sort(all.begin(), all.end());
  const double n = static_cast<double>(all.size());
  std::vector<double> rank_sum(groups.size(), 0.0);
  double ties = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].first == all[i].first) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t m = i; m < j; ++m) rank_sum[all[m].second] += avg;
    const double t = static_cast<double>(j - i);
    ties += t * t * t - t;
    i = j;
  }
  const double correction = 1.0 - ties / (n * n * n - n);
  TestResult r;
  if (correction <= 0.0) return r;  // every value identical
  double s = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (!groups[g].empty()) s += rank_sum[g] * rank_sum[g] / static_cast<double>(groups[g].size());
  }
  r.statistic = std::max(0.0, (12.0 / (n * (n + 1.0)) * s - 3.0 * (n + 1.0)) / correction);
  r.p = chi2_sf(r.statistic, static_cast<double>(k - 1));
  return r;
}

TTest paired_t_test(std::span<const double> d) {
  if (d.size() < 2) throw StatsError("paired t-test needs at least two pairs");
  TTest r;
  r.mean = mean(d);
  r.df = static_cast<double>(d.size() - 1);
  const double sd = sample_sd(d);
  if (sd == 0.0) {
    r.t = r.mean == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), r.mean);
    r.p = r.mean == 0.0 ? 1.0 : 0.0;
    return r;
  }
  r.t = r.mean / (sd / std::sqrt(static_cast<double>(d.size())));
  r.p = t_two_sided_p(r.t, r.df);
  return r;
}

}  // namespace scout::stats
