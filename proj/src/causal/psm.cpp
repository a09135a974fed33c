#include "scout/causal/psm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "scout/format.hpp"
#include "scout/rng.hpp"
#include "scout/stats/descriptive.hpp"
#include "scout/stats/logistic.hpp"
#include "scout/stats/tests.hpp"

namespace scout::causal {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sample_var(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = stats::mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

}  // namespace

stats::DesignSpec default_covariates() {
  stats::DesignSpec spec;
  spec.numeric = {"logcit_past", "p_past"};
  spec.categorical = {{"year_first", std::nullopt}, {"area_first", std::nullopt}};
  return spec;
}

double smd(std::span<const double> treated, std::span<const double> control) {
  if (treated.empty() || control.empty()) return 0.0;
  const double pooled = std::sqrt((sample_var(treated) + sample_var(control)) / 2.0);
  const double diff = stats::mean(treated) - stats::mean(control);
  if (pooled == 0.0) return 0.0;
  return diff / pooled;
}

MatchResult match_greedy(std::span<const double> score, std::span<const std::uint8_t> treated, double caliper,
                         std::uint64_t seed) {
  if (score.size() != treated.size()) throw stats::StatsError("match_greedy: length mismatch");
  std::vector<std::size_t> t_idx, c_idx;
  for (std::size_t i = 0; i < score.size(); ++i) (treated[i] ? t_idx : c_idx).push_back(i);

  // Controls sorted by score so the nearest unused one is found by scanning
  // outward from the insertion point.
  std::vector<std::size_t> order(c_idx);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
  std::vector<bool> used(order.size(), false);

  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(t_idx));

  MatchResult result;
  result.caliper = caliper;
  for (std::size_t t : t_idx) {
    const double s = score[t];
    const auto pos = static_cast<std::size_t>(
        std::lower_bound(order.begin(), order.end(), s,
                         [&](std::size_t c, double v) { return score[c] < v; }) -
        order.begin());
    double best_gap = std::numeric_limits<double>::infinity();
    std::size_t best = order.size();
    auto consider = [&](std::size_t k) {
      const double gap = std::abs(score[order[k]] - s);
      if (gap < best_gap || (gap == best_gap && order[k] < order[best])) {
        best_gap = gap;
        best = k;
      }
    };
    for (std::size_t k = pos; k < order.size(); ++k) {
      if (used[k]) continue;
      if (std::abs(score[order[k]] - s) > best_gap) break;
      consider(k);
    }
    for (std::size_t k = pos; k-- > 0;) {
      if (used[k]) continue;
      if (std::abs(score[order[k]] - s) > best_gap) break;
      consider(k);
    }
    if (best == order.size() || best_gap > caliper) {
      ++result.unmatched_treated;
      continue;
    }
    used[best] = true;
    result.pairs.push_back({t, order[best], best_gap});
  }
  result.unused_controls = static_cast<std::size_t>(std::count(used.begin(), used.end(), false));
  return result;
}

std::vector<double> psm_treatment(const stats::Frame& frame, const PsmSpec& spec) {
  std::vector<double> out(frame.rows, kNaN);
  if (spec.treat_on == TreatOn::group_pair) {
    const auto& g = frame.cat("group");
    for (std::size_t i = 0; i < frame.rows; ++i) {
      if (g[i] == spec.treated_group) out[i] = 1.0;
      else if (g[i] == spec.control_group) out[i] = 0.0;
    }
    return out;
  }
  const auto& v = frame.num(spec.treat_on == TreatOn::ep ? "ep_past" : "ed_past");
  std::vector<double> defined;
  for (double x : v) {
    if (!std::isnan(x)) defined.push_back(x);
  }
  if (defined.empty()) return out;
  const double median = stats::quantile(defined, 0.5);
  for (std::size_t i = 0; i < frame.rows; ++i) {
    if (!std::isnan(v[i])) out[i] = v[i] > median ? 1.0 : 0.0;
  }
  return out;
}

PsmResult psm(const stats::Frame& frame, const PsmSpec& spec) {
  stats::DesignSpec cov = spec.covariates;
  if (cov.numeric.empty() && cov.categorical.empty()) cov = default_covariates();
  if (spec.treat_on == TreatOn::ed &&
      std::find(cov.numeric.begin(), cov.numeric.end(), "ep_past") == cov.numeric.end()) {
    cov.numeric.push_back("ep_past");
  }
  const auto treatment = psm_treatment(frame, spec);
  return psm_with_treatment(frame, treatment, cov, spec.outcome, spec.caliper_sd, spec.seed);
}

PsmResult psm_with_treatment(const stats::Frame& frame, std::span<const double> treatment,
                             const stats::DesignSpec& covariates, const std::string& outcome, double caliper_sd,
                             std::uint64_t seed) {
  if (treatment.size() != frame.rows) throw stats::StatsError("psm: treatment length mismatch");
  std::vector<std::size_t> assigned;
  for (std::size_t i = 0; i < frame.rows; ++i) {
    if (!std::isnan(treatment[i])) assigned.push_back(i);
  }
  const stats::Frame sub = frame.select(assigned);
  const std::vector<std::string> required{outcome};
  stats::DesignMatrix design = stats::drop_constant_columns(stats::build_design(sub, covariates, required));
  const Eigen::VectorXd y = stats::design_response(sub, outcome, design);
  const std::size_t n = design.rows.size();

  std::vector<double> labels(n);
  std::vector<std::uint8_t> is_treated(n);
  PsmResult result;
  for (std::size_t r = 0; r < n; ++r) {
    labels[r] = treatment[assigned[design.rows[r]]];
    is_treated[r] = labels[r] == 1.0;
    (is_treated[r] ? result.n_treated : result.n_control) += 1;
  }
  if (result.n_treated == 0 || result.n_control == 0) throw stats::StatsError("psm: treatment or control group is empty");

  stats::check_rank(design.x, design.names);
  bool penalized = false;
  const auto model = stats::propensity_fit(design.x, design.names, labels, &penalized);
  if (penalized) result.warnings.push_back("separation in the propensity model; ridge refit");
  const Eigen::VectorXd p = model.predict(design.x);
  std::vector<double> logit(n);
  for (std::size_t r = 0; r < n; ++r) logit[r] = std::log(p[static_cast<Eigen::Index>(r)] / (1.0 - p[static_cast<Eigen::Index>(r)]));

  const double caliper = caliper_sd * stats::population_sd(logit);
  result.match = match_greedy(logit, is_treated, caliper, seed);
  if (result.match.pairs.empty()) throw stats::StatsError("psm: no matches within caliper");

  // Balance on every encoded covariate, before and after matching.
  for (Eigen::Index c = 0; c < design.x.cols(); ++c) {
    const auto& name = design.names[static_cast<std::size_t>(c)];
    if (name == "(intercept)") continue;
    std::vector<double> bt, bc, at, ac;
    for (std::size_t r = 0; r < n; ++r) (is_treated[r] ? bt : bc).push_back(design.x(static_cast<Eigen::Index>(r), c));
    for (const auto& pr : result.match.pairs) {
      at.push_back(design.x(static_cast<Eigen::Index>(pr.treated), c));
      ac.push_back(design.x(static_cast<Eigen::Index>(pr.control), c));
    }
    result.match.balance.push_back({name, smd(bt, bc), smd(at, ac)});
  }

  std::vector<double> yt, yc, diff;
  for (const auto& pr : result.match.pairs) {
    yt.push_back(y[static_cast<Eigen::Index>(pr.treated)]);
    yc.push_back(y[static_cast<Eigen::Index>(pr.control)]);
    diff.push_back(yt.back() - yc.back());
  }
  result.treated_mean = stats::mean(yt);
  result.control_mean = stats::mean(yc);
  result.att = stats::mean(diff);
  result.p_paired_t = diff.size() >= 2 ? stats::paired_t_test(diff).p : 1.0;
  result.p_kruskal = stats::kruskal_wallis({yt, yc}).p;

  // Report pairs in frame row numbering.
  for (auto& pr : result.match.pairs) {
    pr.treated = assigned[design.rows[pr.treated]];
    pr.control = assigned[design.rows[pr.control]];
  }
  return result;
}

void write_pairs_csv(std::ostream& out, const PsmResult& result, const stats::Frame& frame) {
  const auto& ids = frame.cat("author_id");
  out << "treated_id,control_id,gap\n";
  for (const auto& pr : result.match.pairs) {
    out << csv_field(ids[pr.treated]) << ',' << csv_field(ids[pr.control]) << ',' << fmt_double(pr.gap) << '\n';
  }
}

}  // namespace scout::causal
