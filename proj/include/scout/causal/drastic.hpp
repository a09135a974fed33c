#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scout/analysis.hpp"
#include "scout/causal/psw.hpp"

namespace scout::causal {

struct SwitchEffect {
  double estimate = 0.0;
  double se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double p = 1.0;
  double percent = 0.0;
};

struct DrasticDirection {
  Group from = Group::D;
  Group to = Group::A;
  std::size_t origin = 0;     // authors in `from` before the split
  std::size_t switchers = 0;  // ... who are in `to` after it
  std::size_t stayers = 0;    // ... who remain in `from`
  double fraction = 0.0;      // switchers / origin
  double switcher_change = 0.0;  // mean logcit_future - logcit_past over switchers (NaN if none)
  double stayer_change = 0.0;
  std::optional<SwitchEffect> effect;  // absent with fewer than two switchers or stayers
  std::string note;
};

struct DrasticSpec {
  PropensityMethod method = PropensityMethod::logistic;
  stats::DesignSpec covariates;  // empty -> default_covariates()
  std::uint64_t seed = 1;
};

struct DrasticResult {
  DrasticDirection d_to_a;
  DrasticDirection a_to_d;
};

/// `rows_pre` carry groups from metrics before the split, `rows_post` from
/// metrics after it; authors are matched by id. Switchers (treatment) are
/// compared with stayers (control) on post-split impact by propensity
/// weighting.
DrasticResult drastic_change_analysis(const std::vector<AuthorAnalysisRow>& rows_pre,
                                      const std::vector<AuthorAnalysisRow>& rows_post, const DrasticSpec& spec);

}  // namespace scout::causal
