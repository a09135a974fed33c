#include "scout/stats/ols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scout/stats/tests.hpp"

namespace scout::stats {

std::optional<std::size_t> RegressionResult::index(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names.begin());
}

std::size_t RegressionResult::at(const std::string& name) const {
  auto i = index(name);
  if (!i) throw StatsError("no coefficient named " + name);
  return *i;
}

std::pair<double, double> RegressionResult::ci(std::size_t i, double level) const {
  const double q = t_quantile(0.5 + level / 2.0, df());
  return {coef[i] - q * se[i], coef[i] + q * se[i]};
}

std::pair<double, double> RegressionResult::ci_normal(std::size_t i, double level) const {
  const double z = normal_quantile(0.5 + level / 2.0);
  return {coef[i] - z * se[i], coef[i] + z * se[i]};
}

std::string stars(double p) {
  if (std::isnan(p)) return "";
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.1) return "*";
  return "";
}

RegressionResult ols_fit(const Eigen::MatrixXd& x, const std::vector<std::string>& names, const Eigen::VectorXd& y,
                         std::span<const double> weights) {
  const Eigen::Index n = x.rows(), k = x.cols();
  if (y.size() != n) throw StatsError("response length does not match design");
  if (!weights.empty() && static_cast<Eigen::Index>(weights.size()) != n) throw StatsError("weights length mismatch");
  if (n < k || k == 0) throw StatsError("need at least as many rows as columns");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw StatsError("weights must be positive and finite");
  }
  check_rank(x, names);

  Eigen::VectorXd sw = Eigen::VectorXd::Ones(n);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(weights.size()); ++i) sw(i) = std::sqrt(weights[i]);
  const Eigen::MatrixXd xw = sw.asDiagonal() * x;
  const Eigen::VectorXd yw = sw.asDiagonal() * y;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xw);
  const Eigen::VectorXd beta = qr.solve(yw);
  const Eigen::VectorXd resid = yw - xw * beta;

  RegressionResult r;
  r.names = names;
  r.n = static_cast<std::size_t>(n);
  r.k = static_cast<std::size_t>(k);
  const double rss = resid.squaredNorm();
  const double df = static_cast<double>(n - k);

  double wsum = 0.0, wy = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    wsum += sw(i) * sw(i);
    wy += sw(i) * sw(i) * y(i);
  }
  const double ybar = wy / wsum;
  double tss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) tss += sw(i) * sw(i) * (y(i) - ybar) * (y(i) - ybar);
  r.r2 = tss > 0.0 ? 1.0 - rss / tss : 0.0;

  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double sigma2 = df > 0 ? rss / df : nan;
  r.sigma = std::sqrt(sigma2);
  const Eigen::MatrixXd rmat = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd rinv =
      rmat.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd cov_perm = rinv * rinv.transpose();
  const auto& perm = qr.colsPermutation().indices();
  r.coef.resize(static_cast<std::size_t>(k));
  r.se.resize(static_cast<std::size_t>(k));
  r.t.resize(static_cast<std::size_t>(k));
  r.p.resize(static_cast<std::size_t>(k));
  for (Eigen::Index j = 0; j < k; ++j) {
    // Pivot position j holds original column perm(j).
    const auto c = static_cast<std::size_t>(perm(j));
    r.se[c] = std::sqrt(sigma2 * cov_perm(j, j));
  }
  for (Eigen::Index c = 0; c < k; ++c) {
    const auto i = static_cast<std::size_t>(c);
    r.coef[i] = beta(c);
    r.t[i] = r.coef[i] / r.se[i];
    r.p[i] = df > 0 ? t_two_sided_p(r.t[i], df) : nan;
  }
  return r;
}

RegressionResult ols_fit(const DesignMatrix& design, const Eigen::VectorXd& y, std::span<const double> weights) {
  auto r = ols_fit(design.x, design.names, y, weights);
  r.dropped = design.dropped;
  return r;
}

double standardized_coef(double coef, double sd_x, double sd_y) {
  if (!(sd_x > 0.0)) throw StatsError("zero-variance regressor");
  if (!(sd_y > 0.0)) throw StatsError("zero-variance response");
  return coef * sd_x / sd_y;
}

std::vector<double> standardized_coefs(const RegressionResult& result, const DesignMatrix& design,
                                       const Eigen::VectorXd& y) {
  std::vector<double> yv(y.data(), y.data() + y.size());
  const double sd_y = population_sd(yv);
  std::vector<double> out(result.coef.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t c = 0; c < result.coef.size(); ++c) {
    if (result.names[c] == "(intercept)") continue;
    const auto col = design.x.col(static_cast<Eigen::Index>(c));
    std::vector<double> xv(col.data(), col.data() + col.size());
    const double sd_x = population_sd(xv);
    if (!(sd_x > 0.0)) throw StatsError("zero-variance column: " + result.names[c]);
    out[c] = standardized_coef(result.coef[c], sd_x, sd_y);
  }
  return out;
}

double e_value_rr(double rr) {
  if (!(rr > 0.0)) throw StatsError("risk ratio must be positive");
  if (rr < 1.0) rr = 1.0 / rr;
  if (rr == 1.0) return 1.0;
  return rr + std::sqrt(rr * (rr - 1.0));
}

double e_value(double coef, double sd_outcome) {
  if (!(sd_outcome > 0.0)) throw StatsError("outcome sd must be positive");
  return e_value_rr(std::exp(0.91 * std::abs(coef) / sd_outcome));
}

}  // namespace scout::stats
