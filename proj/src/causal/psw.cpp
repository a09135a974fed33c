#include "scout/causal/psw.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <tuple>

#include "scout/causal/psm.hpp"
#include "scout/format.hpp"
#include "scout/stats/descriptive.hpp"
#include "scout/stats/logistic.hpp"
#include "scout/stats/ols.hpp"

namespace scout::causal {

double log_to_percent(double delta_log) { return std::expm1(delta_log); }

const char* to_string(PropensityMethod m) { return m == PropensityMethod::logistic ? "logistic" : "boosted"; }

PropensityMethod parse_propensity_method(const std::string& text) {
  if (text == "logistic") return PropensityMethod::logistic;
  if (text == "boosted") return PropensityMethod::boosted;
  throw stats::StatsError("unknown propensity method: " + text);
}

const GroupEffect& PswResult::effect(const std::string& group) const {
  for (const auto& e : effects) {
    if (e.group == group) return e;
  }
  throw stats::StatsError("no effect estimated for group " + group);
}

PswResult psw(const stats::Frame& frame, const PswSpec& spec, Estimand estimand) {
  const auto& group_of = frame.cat(spec.group_column);
  const auto& groups = spec.groups;
  auto group_pos = [&](const std::string& g) -> std::ptrdiff_t {
    auto it = std::find(groups.begin(), groups.end(), g);
    return it == groups.end() ? -1 : it - groups.begin();
  };
  if (groups.size() < 2) throw stats::StatsError("psw needs at least two groups");
  if (group_pos(spec.baseline) < 0) throw stats::StatsError("baseline group " + spec.baseline + " not listed");
  if (estimand == Estimand::att && group_pos(spec.treated) < 0) {
    throw stats::StatsError("treated group " + spec.treated + " not listed");
  }

  std::vector<std::size_t> listed;
  for (std::size_t i = 0; i < frame.rows; ++i) {
    if (group_pos(group_of[i]) >= 0) listed.push_back(i);
  }
  const stats::Frame sub = frame.select(listed);
  const stats::DesignSpec cov =
      spec.covariates.numeric.empty() && spec.covariates.categorical.empty() ? default_covariates() : spec.covariates;
  const std::vector<std::string> required{spec.outcome};
  const stats::DesignMatrix design = stats::drop_constant_columns(stats::build_design(sub, cov, required));
  const Eigen::VectorXd y = stats::design_response(sub, spec.outcome, design);
  const std::size_t n = design.rows.size();

  PswResult result;
  result.estimand = estimand;
  result.baseline = spec.baseline;
  result.dropped = design.dropped;
  std::vector<std::size_t> label(n);
  std::vector<std::size_t> counts(groups.size(), 0);
  for (std::size_t r = 0; r < n; ++r) {
    result.rows.push_back(listed[design.rows[r]]);
    result.labels.push_back(group_of[result.rows.back()]);
    label[r] = static_cast<std::size_t>(group_pos(result.labels.back()));
    ++counts[label[r]];
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (counts[g] < 2) throw stats::StatsError("group " + groups[g] + " has fewer than 2 members");
  }

  stats::check_rank(design.x, design.names);
  Eigen::MatrixXd prop(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(groups.size()));
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::vector<double> is_g(n);
    for (std::size_t r = 0; r < n; ++r) is_g[r] = label[r] == g ? 1.0 : 0.0;
    if (spec.method == PropensityMethod::logistic) {
      bool penalized = false;
      prop.col(static_cast<Eigen::Index>(g)) =
          stats::propensity_fit(design.x, design.names, is_g, &penalized).predict(design.x);
      if (penalized) result.warnings.push_back("separation in the propensity model of group " + groups[g] + "; ridge refit");
    } else {
      prop.col(static_cast<Eigen::Index>(g)) =
          stats::boosted_stumps_fit(design.x, is_g, spec.trees, spec.shrinkage, spec.seed).predict(design.x);
    }
  }
  const auto treated = static_cast<Eigen::Index>(estimand == Estimand::att ? group_pos(spec.treated) : 0);
  result.weights.resize(n);
  result.propensity.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto ri = static_cast<Eigen::Index>(r);
    const double total = prop.row(ri).sum();
    prop.row(ri) /= total;
    for (Eigen::Index g = 0; g < prop.cols(); ++g) result.propensity[r].push_back(prop(ri, g));
    const double own = prop(ri, static_cast<Eigen::Index>(label[r]));
    if (estimand == Estimand::ate) {
      result.weights[r] = 1.0 / own;
    } else {
      result.weights[r] = static_cast<Eigen::Index>(label[r]) == treated ? 1.0 : prop(ri, treated) / own;
    }
  }

  if (spec.trim_percentile > 0.0 && spec.trim_percentile < 100.0) {
    result.weight_cap = stats::quantile(result.weights, spec.trim_percentile / 100.0);
    for (double& w : result.weights) {
      if (w > result.weight_cap) {
        w = result.weight_cap;
        ++result.trimmed;
      }
    }
  } else {
    result.weight_cap = *std::max_element(result.weights.begin(), result.weights.end());
  }

  std::vector<std::string> names{"(intercept)"};
  std::vector<std::size_t> effect_groups;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g] == spec.baseline) continue;
    effect_groups.push_back(g);
    names.push_back(spec.group_column + "[" + groups[g] + "]");
  }
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(names.size()));
  for (std::size_t r = 0; r < n; ++r) {
    x(static_cast<Eigen::Index>(r), 0) = 1.0;
    for (std::size_t e = 0; e < effect_groups.size(); ++e) {
      if (label[r] == effect_groups[e]) x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(e + 1)) = 1.0;
    }
  }
  const auto fit = stats::ols_fit(x, names, y, result.weights);
  result.baseline_n = counts[static_cast<std::size_t>(group_pos(spec.baseline))];
  for (std::size_t e = 0; e < effect_groups.size(); ++e) {
    GroupEffect ge;
    ge.group = groups[effect_groups[e]];
    ge.n = counts[effect_groups[e]];
    ge.estimate = fit.coef[e + 1];
    ge.se = fit.se[e + 1];
    std::tie(ge.ci_low, ge.ci_high) = fit.ci(e + 1);
    ge.p = fit.p[e + 1];
    ge.percent = log_to_percent(ge.estimate);
    result.effects.push_back(ge);
  }
  return result;
}

stats::Frame relabel_vs_rest(const stats::Frame& frame, const std::string& column, const std::string& target) {
  (void)frame.cat(column);  // throws for unknown columns
  stats::Frame out = frame;
  auto& labels = out.categorical.at(column);
  for (auto& l : labels) {
    if (!l.empty() && l != target) l = "rest";
  }
  return out;
}

void write_weights_csv(std::ostream& out, const PswResult& result, const stats::Frame& frame) {
  const auto& ids = frame.cat("author_id");
  out << "author_id,group,weight\n";
  for (std::size_t r = 0; r < result.rows.size(); ++r) {
    out << csv_field(ids[result.rows[r]]) << ',' << csv_field(result.labels[r]) << ',' << fmt_double(result.weights[r])
        << '\n';
  }
}

}  // namespace scout::causal
