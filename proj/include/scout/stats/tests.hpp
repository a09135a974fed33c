#pragma once

#include <span>
#include <vector>

namespace scout::stats {

double normal_quantile(double p);
double t_quantile(double p, double df);
/// Two-sided p-value of a t statistic.
double t_two_sided_p(double t, double df);
/// Upper tail of chi-square with `df` degrees of freedom.
double chi2_sf(double x, double df);
/// Two-sided p-value of a standard normal statistic.
double normal_two_sided_p(double z);

/// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_sf(double lambda);

struct TestResult {
  double statistic = 0.0;
  double p = 1.0;
};

/// D = sup |F_x - F_y|; p from the asymptotic Kolmogorov law at sqrt(n_x n_y / (n_x + n_y)) · D.
TestResult ks_two_sample(std::span<const double> x, std::span<const double> y);

/// H with tie correction, chi-square(k - 1) p-value.
TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

struct TTest {
  double mean = 0.0;
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

/// One-sample t-test of mean(d) = 0; used on matched-pair differences.
TTest paired_t_test(std::span<const double> differences);

}  // namespace scout::stats
