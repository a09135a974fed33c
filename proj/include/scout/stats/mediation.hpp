#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "scout/kernels.hpp"
#include "scout/stats/design.hpp"

namespace scout::stats {

struct EffectEstimate {
  double estimate = 0.0;
  double se = 0.0;                       // analytic (Sobel for the indirect effect)
  std::pair<double, double> ci_normal;   // estimate ± 1.96 se
  std::pair<double, double> ci_boot;     // percentile bootstrap
  double p_normal = 1.0;
  double p_boot = 1.0;
};

struct MediationResult {
  double a = 0.0;  // treatment -> mediator
  double b = 0.0;  // mediator -> outcome given treatment
  EffectEstimate acme;
  EffectEstimate ade;
  EffectEstimate total;
  std::size_t n = 0;
  std::size_t replicates = 0;
  std::size_t failed_replicates = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
};

struct MediationSpec {
  std::string treatment;
  std::string mediator;
  std::string outcome;
  DesignSpec controls;  // intercept flag is taken from here
  std::size_t bootstrap = 500;
  std::uint64_t seed = 1;
  std::size_t min_cases = 10;
  double collinearity_warn = 0.9;
};

/// Product-of-coefficients mediation with percentile bootstrap intervals.
/// ACME = a·b, ADE = c, total = c + a·b.
MediationResult mediation(const Frame& frame, const MediationSpec& spec, Exec exec = Exec::parallel);

}  // namespace scout::stats
