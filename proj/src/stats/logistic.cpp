#include "scout/stats/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scout/rng.hpp"
#include "scout/stats/design.hpp"

namespace scout::stats {

double clip_probability(double p) { return std::clamp(p, kProbClip, 1.0 - kProbClip); }

namespace {

double sigmoid(double eta) {
  if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

double weight_at(std::span<const double> w, std::size_t i) { return w.empty() ? 1.0 : w[i]; }

void check_labels(std::span<const double> y, Eigen::Index n, std::span<const double> w) {
  if (static_cast<Eigen::Index>(y.size()) != n) throw StatsError("label length does not match design");
  if (!w.empty() && w.size() != y.size()) throw StatsError("weights length mismatch");
  bool pos = false, neg = false;
  for (double v : y) {
    if (v != 0.0 && v != 1.0) throw StatsError("labels must be 0 or 1");
    (v == 1.0 ? pos : neg) = true;
  }
  if (!pos || !neg) throw StatsError("both classes must be present");
}

}  // namespace

double bernoulli_deviance(std::span<const double> y, const Eigen::VectorXd& p, std::span<const double> w) {
  double d = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double pi = std::clamp(p(static_cast<Eigen::Index>(i)), 1e-300, 1.0 - 1e-16);
    d -= 2.0 * weight_at(w, i) * (y[i] == 1.0 ? std::log(pi) : std::log1p(-pi));
  }
  return d;
}

Eigen::VectorXd LogisticModel::predict_raw(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd eta = x * coef;
  return eta.unaryExpr([](double e) { return sigmoid(e); });
}

Eigen::VectorXd LogisticModel::predict(const Eigen::MatrixXd& x) const {
  return predict_raw(x).unaryExpr([](double p) { return clip_probability(p); });
}

LogisticModel logistic_fit(const Eigen::MatrixXd& x, const std::vector<std::string>& names,
                           std::span<const double> y, std::span<const double> w, double ridge) {
  const Eigen::Index n = x.rows(), k = x.cols();
  check_labels(y, n, w);
  if (ridge < 0.0 || !std::isfinite(ridge)) throw StatsError("ridge penalty must be finite and non-negative");
  if (ridge == 0.0) check_rank(x, names);
  std::vector<Eigen::Index> penalized;
  for (Eigen::Index j = 0; j < k; ++j) {
    if (names[static_cast<std::size_t>(j)] != "(intercept)") penalized.push_back(j);
  }
  const auto extra = ridge > 0.0 ? static_cast<Eigen::Index>(penalized.size()) : 0;
  LogisticModel m;
  m.names = names;
  m.coef = Eigen::VectorXd::Zero(k);
  constexpr int kMaxIter = 100;
  constexpr double kTol = 1e-8;
  constexpr double kEtaLimit = 30.0;
  for (int it = 1; it <= kMaxIter; ++it) {
    const Eigen::VectorXd eta = x * m.coef;
    if (ridge == 0.0 && eta.cwiseAbs().maxCoeff() > kEtaLimit) {
      throw SeparationError("logistic fit diverges (perfect or quasi-perfect separation); "
                            "tighten the caliper, trim, or drop the separating covariate");
    }
    Eigen::VectorXd sw(n), z(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double p = sigmoid(eta(i));
      const double v = std::max(p * (1.0 - p), 1e-12);
      sw(i) = std::sqrt(weight_at(w, static_cast<std::size_t>(i)) * v);
      z(i) = eta(i) + (y[static_cast<std::size_t>(i)] - p) / v;
    }
    // Penalty rows sqrt(ridge) * e_j with target 0 turn the penalized Newton
    // step into an ordinary least-squares solve.
    Eigen::MatrixXd xw = Eigen::MatrixXd::Zero(n + extra, k);
    Eigen::VectorXd zw = Eigen::VectorXd::Zero(n + extra);
    xw.topRows(n) = sw.asDiagonal() * x;
    zw.head(n) = sw.asDiagonal() * z;
    for (Eigen::Index r = 0; r < extra; ++r) xw(n + r, penalized[static_cast<std::size_t>(r)]) = std::sqrt(ridge);
    const Eigen::VectorXd next = xw.colPivHouseholderQr().solve(zw);
    const double step = (next - m.coef).cwiseAbs().maxCoeff();
    m.coef = next;
    m.iterations = it;
    if (step < kTol) {
      m.deviance = bernoulli_deviance(y, m.predict_raw(x), w);
      return m;
    }
  }
  throw SeparationError("logistic fit did not converge in 100 iterations (possible separation); "
                        "tighten the caliper, trim, or drop the separating covariate");
}

LogisticModel propensity_fit(const Eigen::MatrixXd& x, const std::vector<std::string>& names,
                             std::span<const double> labels, bool* penalized) {
  if (penalized) *penalized = false;
  try {
    return logistic_fit(x, names, labels);
  } catch (const SeparationError&) {
    if (penalized) *penalized = true;
    return logistic_fit(x, names, labels, {}, kPropensityRidge);
  }
}

Eigen::VectorXd BoostedModel::log_odds(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd f = Eigen::VectorXd::Constant(x.rows(), base);
  for (const auto& s : stumps) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) f(i) += x(i, s.feature) <= s.threshold ? s.left : s.right;
  }
  return f;
}

Eigen::VectorXd BoostedModel::predict_raw(const Eigen::MatrixXd& x) const {
  return log_odds(x).unaryExpr([](double e) { return sigmoid(e); });
}

Eigen::VectorXd BoostedModel::predict(const Eigen::MatrixXd& x) const {
  return predict_raw(x).unaryExpr([](double p) { return clip_probability(p); });
}

BoostedModel boosted_stumps_fit(const Eigen::MatrixXd& x, std::span<const double> y, int trees, double shrinkage,
                                std::uint64_t seed, std::span<const double> w) {
  const Eigen::Index n = x.rows(), f = x.cols();
  check_labels(y, n, w);
  if (trees < 0) throw StatsError("tree count must be nonnegative");
  if (!(shrinkage > 0.0 && shrinkage <= 1.0)) throw StatsError("shrinkage must be in (0, 1]");

  BoostedModel m;
  double wpos = 0.0, wall = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    wpos += weight_at(w, i) * y[i];
    wall += weight_at(w, i);
  }
  const double prev = wpos / wall;
  m.base = std::log(prev / (1.0 - prev));

  std::vector<std::vector<Eigen::Index>> order(static_cast<std::size_t>(f));
  for (Eigen::Index c = 0; c < f; ++c) {
    auto& o = order[static_cast<std::size_t>(c)];
    o.resize(static_cast<std::size_t>(n));
    std::iota(o.begin(), o.end(), Eigen::Index{0});
    std::stable_sort(o.begin(), o.end(), [&](Eigen::Index a, Eigen::Index b) { return x(a, c) < x(b, c); });
  }

  Rng rng(seed);
  Eigen::VectorXd fx = Eigen::VectorXd::Constant(n, m.base);
  auto probs = [](const Eigen::VectorXd& lo) { return lo.unaryExpr([](double e) { return sigmoid(e); }).eval(); };
  double dev = bernoulli_deviance(y, probs(fx), w);
  m.deviance.push_back(dev);

  std::vector<double> g(static_cast<std::size_t>(n)), h(static_cast<std::size_t>(n));
  for (int t = 0; t < trees; ++t) {
    const Eigen::VectorXd p = probs(fx);
    double gt = 0.0, ht = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      g[ui] = weight_at(w, ui) * (y[ui] - p(i));
      h[ui] = weight_at(w, ui) * std::max(p(i) * (1.0 - p(i)), 1e-12);
      gt += g[ui];
      ht += h[ui];
    }
    struct Candidate {
      Eigen::Index feature;
      double threshold, gl, hl;
    };
    std::vector<Candidate> best;
    double best_gain = -1.0;
    for (Eigen::Index c = 0; c < f; ++c) {
      const auto& o = order[static_cast<std::size_t>(c)];
      double gl = 0.0, hl = 0.0;
      for (std::size_t q = 0; q + 1 < o.size(); ++q) {
        gl += g[static_cast<std::size_t>(o[q])];
        hl += h[static_cast<std::size_t>(o[q])];
        const double xv = x(o[q], c), xn = x(o[q + 1], c);
        if (xv == xn) continue;
        const double gr = gt - gl, hr = ht - hl;
        const double gain = gl * gl / hl + gr * gr / hr;
        const Candidate cand{c, (xv + xn) / 2.0, gl, hl};
        if (gain > best_gain * (1.0 + 1e-12) + 1e-300) {
          best_gain = gain;
          best.assign(1, cand);
        } else if (gain >= best_gain * (1.0 - 1e-12)) {
          best.push_back(cand);
        }
      }
    }
    if (best.empty()) break;  // every feature constant
    const Candidate& c = best.size() == 1 ? best.front() : best[rng.index(best.size())];
    Stump s{c.feature, c.threshold, shrinkage * c.gl / c.hl, shrinkage * (gt - c.gl) / (ht - c.hl)};

    double step = 1.0;
    Eigen::VectorXd trial(n);
    double trial_dev = dev;
    for (int halving = 0; halving < 40; ++halving) {
      for (Eigen::Index i = 0; i < n; ++i) trial(i) = fx(i) + step * (x(i, s.feature) <= s.threshold ? s.left : s.right);
      trial_dev = bernoulli_deviance(y, probs(trial), w);
      if (trial_dev <= dev) break;
      step /= 2.0;
    }
    if (trial_dev > dev) {
      s.left = s.right = 0.0;
      trial = fx;
      trial_dev = dev;
    } else {
      s.left *= step;
      s.right *= step;
    }
    fx = trial;
    dev = trial_dev;
    m.stumps.push_back(s);
    m.deviance.push_back(dev);
  }
  return m;
}

}  // namespace scout::stats
