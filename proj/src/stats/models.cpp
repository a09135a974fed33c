#include "scout/stats/models.hpp"

#include <limits>

#include "scout/stats/bootstrap.hpp"

namespace scout::stats {

const char* to_string(ModelSpec m) {
  switch (m) {
    case ModelSpec::S3: return "S3";
    case ModelSpec::S4: return "S4";
    case ModelSpec::S5: return "S5";
    case ModelSpec::S6: return "S6";
    case ModelSpec::S8: return "S8";
    case ModelSpec::S9: return "S9";
    case ModelSpec::S10: return "S10";
    case ModelSpec::S11: return "S11";
  }
  return "?";
}

ModelSpec parse_model_spec(std::string_view s) {
  for (auto m : {ModelSpec::S3, ModelSpec::S4, ModelSpec::S5, ModelSpec::S6, ModelSpec::S8, ModelSpec::S9,
                 ModelSpec::S10, ModelSpec::S11}) {
    if (s == to_string(m)) return m;
  }
  throw StatsError("unknown model: " + std::string(s));
}

ModelDesign model_design(ModelSpec spec, const ModelExtras& extras) {
  ModelDesign md;
  md.response = "logcit_future";
  DesignSpec& d = md.design;
  auto controls = [&] {
    d.numeric = {"logcit_past", "p_past"};
    d.categorical = {{"year_first", std::nullopt}, {"area_first", std::nullopt}};
  };
  switch (spec) {
    case ModelSpec::S3:
      controls();
      d.numeric.push_back("ep_past");
      break;
    case ModelSpec::S4:
      controls();
      d.numeric.insert(d.numeric.end(), {"ep_past", "ed_past"});
      break;
    case ModelSpec::S5:
      d.numeric = {"ep_past", "ed_past"};
      break;
    case ModelSpec::S6:
      controls();
      d.categorical.push_back({"group", std::string("D")});
      break;
    case ModelSpec::S8:
      controls();
      d.numeric.insert(d.numeric.end(), {"ep_future", "ed_future"});
      break;
    case ModelSpec::S9:
      if (extras.numeric.empty()) throw StatsError("S9 needs a factor variable as response");
      controls();
      d.numeric.insert(d.numeric.end(), {"ep_past", "ed_past"});
      md.response = extras.numeric.front();
      return md;
    case ModelSpec::S10:
    case ModelSpec::S11:
      controls();
      d.numeric.insert(d.numeric.end(), {"ep_past", "ed_past"});
      break;
  }
  if (spec == ModelSpec::S10 || spec == ModelSpec::S11) {
    if (extras.numeric.empty() && extras.categorical.empty()) {
      throw StatsError(std::string(to_string(spec)) + " needs at least one extra variable");
    }
  }
  d.numeric.insert(d.numeric.end(), extras.numeric.begin(), extras.numeric.end());
  for (const auto& c : extras.categorical) d.categorical.push_back({c, std::nullopt});
  return md;
}

RegressionResult run_model(const Frame& frame, ModelSpec spec, const ModelExtras& extras,
                           std::span<const double> weights) {
  const auto md = model_design(spec, extras);
  const std::string required[] = {md.response};
  const auto design = build_design(frame, md.design, required);
  const auto y = design_response(frame, md.response, design);
  if (!weights.empty()) {
    std::vector<double> w;
    for (std::size_t r : design.rows) w.push_back(weights[r]);
    return ols_fit(design, y, w);
  }
  return ols_fit(design, y);
}

CoefficientBootstrap bootstrap_model(const Frame& frame, ModelSpec spec, const ModelExtras& extras,
                                     const RegressionResult& fit, std::size_t replicates, std::uint64_t seed,
                                     double level, Exec exec) {
  const auto md = model_design(spec, extras);
  const std::string required[] = {md.response};
  const auto design = build_design(frame, md.design, required);
  const auto y = design_response(frame, md.response, design);
  const auto n = static_cast<std::size_t>(design.x.rows());
  const std::size_t k = fit.coef.size();
  if (design.names != fit.names) throw StatsError("bootstrap_model: fit does not match the model design");

  auto draws = bootstrap_replicates(
      replicates, seed,
      [&](Rng& rng) -> std::optional<std::vector<double>> {
        const auto idx = resample_indices(n, rng);
        Eigen::MatrixXd xb(design.x.rows(), design.x.cols());
        Eigen::VectorXd yb(y.size());
        for (std::size_t i = 0; i < n; ++i) {
          xb.row(static_cast<Eigen::Index>(i)) = design.x.row(static_cast<Eigen::Index>(idx[i]));
          yb(static_cast<Eigen::Index>(i)) = y(static_cast<Eigen::Index>(idx[i]));
        }
        try {
          return ols_fit(xb, design.names, yb).coef;
        } catch (const StatsError&) {
          return std::nullopt;
        }
      },
      exec);

  CoefficientBootstrap out;
  out.replicates = replicates;
  std::vector<std::vector<double>> per_coef(k);
  for (const auto& d : draws) {
    if (!d) {
      ++out.failed;
      continue;
    }
    for (std::size_t c = 0; c < k; ++c) per_coef[c].push_back((*d)[c]);
  }
  for (std::size_t c = 0; c < k; ++c) {
    const auto [lo, hi] = percentile_ci(per_coef[c], level);
    out.ci_low.push_back(lo);
    out.ci_high.push_back(hi);
  }
  return out;
}

}  // namespace scout::stats
