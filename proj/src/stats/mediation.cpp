#include "scout/stats/mediation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "scout/stats/bootstrap.hpp"
#include "scout/stats/ols.hpp"
#include "scout/stats/tests.hpp"

namespace scout::stats {

namespace {

struct Paths {
  double a, b, c, total;
};

// Drops non-intercept columns that are constant (empty indicator levels in a resample).
Eigen::MatrixXd drop_constant(const Eigen::MatrixXd& x, std::vector<std::string>& names, bool intercept) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    if ((intercept && c == 0) || x.col(c).maxCoeff() != x.col(c).minCoeff()) keep.push_back(c);
  }
  Eigen::MatrixXd out(x.rows(), static_cast<Eigen::Index>(keep.size()));
  std::vector<std::string> kept;
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = x.col(keep[k]);
    kept.push_back(names[static_cast<std::size_t>(keep[k])]);
  }
  names = std::move(kept);
  return out;
}

Eigen::MatrixXd without(const Eigen::MatrixXd& x, Eigen::Index col) {
  Eigen::MatrixXd out(x.rows(), x.cols() - 1);
  out << x.leftCols(col), x.rightCols(x.cols() - col - 1);
  return out;
}

std::vector<std::string> without(std::vector<std::string> v, std::size_t i) {
  v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
  return v;
}

Paths fit_paths(const Eigen::MatrixXd& xo, const std::vector<std::string>& names, const Eigen::VectorXd& y,
                const std::string& t, const std::string& m, RegressionResult* out_model = nullptr,
                RegressionResult* med_model = nullptr, RegressionResult* tot_model = nullptr) {
  const auto mi = static_cast<std::size_t>(std::find(names.begin(), names.end(), m) - names.begin());
  const Eigen::MatrixXd xm = without(xo, static_cast<Eigen::Index>(mi));
  const auto names_m = without(names, mi);
  const Eigen::VectorXd mv = xo.col(static_cast<Eigen::Index>(mi));
  const auto med = ols_fit(xm, names_m, mv);
  const auto out = ols_fit(xo, names, y);
  const auto tot = ols_fit(xm, names_m, y);
  if (out_model) *out_model = out;
  if (med_model) *med_model = med;
  if (tot_model) *tot_model = tot;
  const double a = med.coef[med.at(t)];
  const double b = out.coef[out.at(m)];
  const double c = out.coef[out.at(t)];
  return {a, b, c, c + a * b};
}

EffectEstimate make_effect(double est, double se, const std::vector<double>& boot) {
  EffectEstimate e;
  e.estimate = est;
  e.se = se;
  e.ci_normal = {est - 1.959963984540054 * se, est + 1.959963984540054 * se};
  e.p_normal = se > 0 ? normal_two_sided_p(est / se) : (est == 0.0 ? 1.0 : 0.0);
  e.ci_boot = percentile_ci(boot);
  e.p_boot = bootstrap_p(boot);
  return e;
}

}  // namespace

MediationResult mediation(const Frame& frame, const MediationSpec& spec, Exec exec) {
  DesignSpec ds = spec.controls;
  ds.numeric.insert(ds.numeric.begin(), {spec.treatment, spec.mediator});
  const std::string required[] = {spec.outcome};
  const auto design = build_design(frame, ds, required);
  if (design.rows.size() < spec.min_cases) {
    throw StatsError("mediation: " + std::to_string(design.rows.size()) + " complete cases, need " +
                     std::to_string(spec.min_cases));
  }
  const Eigen::VectorXd y = design_response(frame, spec.outcome, design);

  MediationResult r;
  r.n = design.rows.size();
  r.seed = spec.seed;
  r.replicates = spec.bootstrap;
  {
    const auto ti = *design.column(spec.treatment), mi = *design.column(spec.mediator);
    const Eigen::VectorXd tc = design.x.col(static_cast<Eigen::Index>(ti));
    const Eigen::VectorXd mc = design.x.col(static_cast<Eigen::Index>(mi));
    std::vector<double> tv(tc.data(), tc.data() + tc.size()), mv(mc.data(), mc.data() + mc.size());
    if (auto rho = try_pearson(tv, mv); rho && std::abs(*rho) > spec.collinearity_warn) {
      r.warnings.push_back("treatment and mediator are highly collinear (|r| > " +
                           std::to_string(spec.collinearity_warn) + ")");
    }
  }

  RegressionResult out_m, med_m, tot_m;
  const Paths base = fit_paths(design.x, design.names, y, spec.treatment, spec.mediator, &out_m, &med_m, &tot_m);
  r.a = base.a;
  r.b = base.b;

  const auto reps = bootstrap_replicates(
      spec.bootstrap, spec.seed,
      [&](Rng& rng) -> std::optional<std::vector<double>> {
        const auto idx = resample_indices(design.rows.size(), rng);
        Eigen::MatrixXd xb(static_cast<Eigen::Index>(idx.size()), design.x.cols());
        Eigen::VectorXd yb(static_cast<Eigen::Index>(idx.size()));
        for (std::size_t i = 0; i < idx.size(); ++i) {
          xb.row(static_cast<Eigen::Index>(i)) = design.x.row(static_cast<Eigen::Index>(idx[i]));
          yb(static_cast<Eigen::Index>(i)) = y(static_cast<Eigen::Index>(idx[i]));
        }
        auto names = design.names;
        xb = drop_constant(xb, names, ds.intercept);
        if (std::find(names.begin(), names.end(), spec.treatment) == names.end() ||
            std::find(names.begin(), names.end(), spec.mediator) == names.end()) {
          return std::nullopt;
        }
        try {
          const Paths p = fit_paths(xb, names, yb, spec.treatment, spec.mediator);
          return std::vector<double>{p.a * p.b, p.c, p.total};
        } catch (const StatsError&) {
          return std::nullopt;
        }
      },
      exec);
  std::vector<double> acme, ade, total;
  for (const auto& rep : reps) {
    if (!rep) {
      ++r.failed_replicates;
      continue;
    }
    acme.push_back((*rep)[0]);
    ade.push_back((*rep)[1]);
    total.push_back((*rep)[2]);
  }

  const double se_a = med_m.se[med_m.at(spec.treatment)];
  const double se_b = out_m.se[out_m.at(spec.mediator)];
  const double sobel = std::sqrt(base.b * base.b * se_a * se_a + base.a * base.a * se_b * se_b);
  r.acme = make_effect(base.a * base.b, sobel, acme);
  r.ade = make_effect(base.c, out_m.se[out_m.at(spec.treatment)], ade);
  r.total = make_effect(base.total, tot_m.se[tot_m.at(spec.treatment)], total);
  return r;
}

}  // namespace scout::stats
