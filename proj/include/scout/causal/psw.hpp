#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "scout/stats/design.hpp"

namespace scout::causal {

/// exp(delta) - 1: a difference of log outcomes as a relative change.
double log_to_percent(double delta_log);

enum class PropensityMethod { logistic, boosted };
enum class Estimand { ate, att };

const char* to_string(PropensityMethod m);
PropensityMethod parse_propensity_method(const std::string& text);

struct PswSpec {
  std::string group_column = "group";
  std::vector<std::string> groups = {"A", "B", "C", "D"};
  std::string baseline = "D";
  std::string treated = "A";  // ATT only
  stats::DesignSpec covariates;  // empty -> default_covariates()
  std::string outcome = "logcit_future";
  PropensityMethod method = PropensityMethod::logistic;
  double trim_percentile = 99.0;  // weights above this percentile are capped; <= 0 or >= 100 disables
  int trees = 200;
  double shrinkage = 0.05;
  std::uint64_t seed = 1;
};

struct GroupEffect {
  std::string group;
  std::size_t n = 0;
  double estimate = 0.0;  // difference to the baseline group
  double se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double p = 1.0;
  double percent = 0.0;  // log_to_percent(estimate)
};

struct PswResult {
  Estimand estimand = Estimand::ate;
  std::string baseline;
  std::size_t baseline_n = 0;
  std::vector<GroupEffect> effects;  // one per non-baseline group, in spec order
  std::vector<std::size_t> rows;     // frame rows used
  std::vector<std::string> labels;   // group of each used row
  std::vector<double> weights;       // final (trimmed) weight of each used row
  std::vector<std::vector<double>> propensity;  // normalized, [row][group in spec order]
  double weight_cap = 0.0;
  std::size_t trimmed = 0;
  std::size_t dropped = 0;  // rows of listed groups with missing covariates or outcome
  std::vector<std::string> warnings;

  /// Effect for `group`; throws StatsError if absent.
  [[nodiscard]] const GroupEffect& effect(const std::string& group) const;
};

/// One-vs-rest propensities per group, normalized to sum to one per row.
/// ATE weights 1/p(own group); ATT weights 1 for the treated group and
/// p(treated)/p(own) otherwise. Outcome regressed by weighted least squares
/// on group indicators with the baseline omitted.
PswResult psw(const stats::Frame& frame, const PswSpec& spec, Estimand estimand);

inline PswResult psw_ate(const stats::Frame& frame, const PswSpec& spec) { return psw(frame, spec, Estimand::ate); }
inline PswResult psw_att(const stats::Frame& frame, const PswSpec& spec) { return psw(frame, spec, Estimand::att); }

/// Copy of `frame` with categorical `column` recoded to `target` / "rest"
/// (empty labels stay empty).
stats::Frame relabel_vs_rest(const stats::Frame& frame, const std::string& column, const std::string& target);

/// Columns author_id, group, weight.
void write_weights_csv(std::ostream& out, const PswResult& result, const stats::Frame& frame);

}  // namespace scout::causal
