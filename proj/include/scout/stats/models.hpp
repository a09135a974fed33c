#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "scout/kernels.hpp"
#include "scout/stats/ols.hpp"

namespace scout::stats {

/// Regression specifications over analysis-row columns.
///  S3: logcit_future ~ logcit_past + p_past + year_first + area_first + ep_past
///  S4: S3 + ed_past
///  S5: logcit_future ~ ep_past + ed_past
///  S6: controls + group dummies (D baseline)
///  S8: controls + ep_future + ed_future
///  S9: extras[0] ~ controls + ep_past + ed_past
///  S10: S4 + extras
///  S11: S4 + extras (numeric and categorical attributes)
enum class ModelSpec { S3, S4, S5, S6, S8, S9, S10, S11 };

const char* to_string(ModelSpec m);
ModelSpec parse_model_spec(std::string_view s);

struct ModelExtras {
  std::vector<std::string> numeric;
  std::vector<std::string> categorical;
};

struct ModelDesign {
  DesignSpec design;
  std::string response;
};

ModelDesign model_design(ModelSpec spec, const ModelExtras& extras = {});

/// Builds the design (complete cases only) and fits OLS.
RegressionResult run_model(const Frame& frame, ModelSpec spec, const ModelExtras& extras = {},
                           std::span<const double> weights = {});

struct CoefficientBootstrap {
  std::vector<double> ci_low;  // parallel to the fitted coefficients; NaN without replicates
  std::vector<double> ci_high;
  std::size_t replicates = 0;
  std::size_t failed = 0;
};

/// Case-resampling bootstrap of a model over its complete-case rows:
/// percentile intervals for every coefficient of `fit`. A replicate whose
/// design loses rank counts as failed.
CoefficientBootstrap bootstrap_model(const Frame& frame, ModelSpec spec, const ModelExtras& extras,
                                     const RegressionResult& fit, std::size_t replicates, std::uint64_t seed,
                                     double level = 0.95, Exec exec = Exec::parallel);

}  // namespace scout::stats
