#include "scout/stats/descriptive.hpp"

#include <algorithm>
#include <cmath>

namespace scout::stats {

double mean(std::span<const double> x) {
  if (x.empty()) throw StatsError("mean of empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

namespace {

double sum_sq_dev(std::span<const double> x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s;
}

}  // namespace

double population_sd(std::span<const double> x) { return std::sqrt(sum_sq_dev(x) / static_cast<double>(x.size())); }

double sample_sd(std::span<const double> x) {
  if (x.size() < 2) throw StatsError("sample sd needs at least two values");
  return std::sqrt(sum_sq_dev(x) / static_cast<double>(x.size() - 1));
}

double weighted_mean(std::span<const double> x, std::span<const double> w) {
  if (x.size() != w.size() || x.empty()) throw StatsError("weighted mean: bad lengths");
  double s = 0.0, sw = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += w[i] * x[i];
    sw += w[i];
  }
  return s / sw;
}

std::optional<double> try_pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw StatsError("pearson: length mismatch");
  if (x.size() < 2) throw StatsError("pearson: need at least two values");
  auto r = try_pearson(x, y);
  if (!r) throw StatsError("pearson: zero variance");
  return *r;
}

double quantile_sorted(std::span<const double> s, double q) {
  if (s.empty()) throw StatsError("quantile of empty sample");
  if (q <= 0.0) return s.front();
  if (q >= 1.0) return s.back();
  const double h = (static_cast<double>(s.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

double quantile(std::span<const double> x, double q) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  return quantile_sorted(s, q);
}

double round_to_multiple(double x, double step) {
  // Nudge by a few ulps so values like 0.35 (stored just below) still round away from zero.
  const double r = x / step;
  const double nudged = r + std::copysign(1e-9, r);
  const double k = std::trunc(nudged + std::copysign(0.5, r));
  const double inv = 1.0 / step;
  if (std::abs(inv - std::round(inv)) < 1e-9) return k / std::round(inv);
  return k * step;
}

}  // namespace scout::stats
