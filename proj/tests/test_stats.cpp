#include <cmath>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "scout/rng.hpp"
#include "scout/stats/bootstrap.hpp"
#include "scout/stats/descriptive.hpp"
#include "scout/stats/logistic.hpp"
#include "scout/stats/mediation.hpp"
#include "scout/stats/models.hpp"
#include "scout/stats/ols.hpp"
#include "scout/stats/tests.hpp"

using namespace scout;
using namespace scout::stats;

namespace {

Eigen::MatrixXd random_design(Rng& rng, int n, int k) {
  Eigen::MatrixXd x(n, k);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    for (int j = 1; j < k; ++j) x(i, j) = rng.normal();
  }
  return x;
}

std::vector<std::string> names_of(int k) {
  std::vector<std::string> v{"(intercept)"};
  for (int j = 1; j < k; ++j) v.push_back("x" + std::to_string(j));
  return v;
}

}  // namespace

TEST_SUITE("stats") {
  TEST_CASE("noiseless line") {
    Eigen::MatrixXd x(5, 2);
    Eigen::VectorXd y(5);
    for (int i = 0; i < 5; ++i) {
      x(i, 0) = 1;
      x(i, 1) = i;
      y(i) = 1 + 2 * i;
    }
    auto r = ols_fit(x, names_of(2), y);
    CHECK(r.coef[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.coef[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.r2 == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("OLS matches the normal equations") {
    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
      auto x = random_design(rng, 200, 6);
      Eigen::VectorXd y(200);
      for (int i = 0; i < 200; ++i) y(i) = x.row(i).sum() + rng.normal();
      auto r = ols_fit(x, names_of(6), y);
      auto beta = oracle::normal_equations(x, y);
      for (int j = 0; j < 6; ++j) CHECK(std::abs(r.coef[static_cast<std::size_t>(j)] - beta[static_cast<std::size_t>(j)]) <= 1e-8);
      Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(r.coef.data(), 6);
      const Eigen::VectorXd resid = y - x * b;
      CHECK((x.transpose() * resid).cwiseAbs().maxCoeff() < 1e-6);
      for (double p : r.p) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
      }
    }
  }

  TEST_CASE("OLS invariances") {
    Rng rng(2);
    auto x = random_design(rng, 100, 4);
    Eigen::VectorXd y(100);
    for (int i = 0; i < 100; ++i) y(i) = 0.5 * x(i, 1) - x(i, 3) + rng.normal();
    auto r = ols_fit(x, names_of(4), y);
    std::vector<double> ones(100, 1.0);
    auto rw = ols_fit(x, names_of(4), y, ones);
    CHECK(r.coef == rw.coef);
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(100);
    perm.setIdentity();
    std::vector<int> idx(100);
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(std::span<int>(idx));
    for (int i = 0; i < 100; ++i) perm.indices()(i) = idx[static_cast<std::size_t>(i)];
    auto rp = ols_fit(perm * x, names_of(4), perm * y);
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(rp.coef[j] == doctest::Approx(r.coef[j]).epsilon(1e-12));
      CHECK(rp.se[j] == doctest::Approx(r.se[j]).epsilon(1e-12));
    }
  }

  TEST_CASE("rank deficiency names the columns") {
    Rng rng(3);
    auto x = random_design(rng, 50, 3);
    Eigen::MatrixXd xd(50, 4);
    xd << x, x.col(1) * 2.0;
    try {
      ols_fit(xd, {"(intercept)", "a", "b", "a2"}, Eigen::VectorXd::Ones(50));
      FAIL("expected a rank error");
    } catch (const RankDeficientError& e) {
      CHECK_FALSE(e.columns().empty());
    }
  }

  TEST_CASE("design encoding") {
    Frame f;
    f.rows = 5;
    f.add("y", std::vector<double>{1, 2, 3, 4, 5});
    f.add("x", std::vector<double>{1, NAN, 3, 4, 5});
    f.add("g", std::vector<std::string>{"b", "a", "c", "a", "b"});
    DesignSpec spec;
    spec.numeric = {"x"};
    spec.categorical = {{"g", std::nullopt}};
    auto d = build_design(f, spec);
    CHECK(d.dropped == 1);
    CHECK(d.names == std::vector<std::string>{"(intercept)", "x", "g[b]", "g[c]"});
    for (Eigen::Index r = 0; r < d.x.rows(); ++r) CHECK(d.x(r, 2) + d.x(r, 3) <= 1.0);
  }

  TEST_CASE("significance stars at the boundaries") {
    CHECK(stars(0.0099) == "***");
    CHECK(stars(0.01) == "**");
    CHECK(stars(0.05) == "*");
    CHECK(stars(0.1) == "");
    CHECK(stars(0.5) == "");
  }

  TEST_CASE("logistic matches a grid-search maximizer") {
    Rng rng(4);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> xs, ys;
      Eigen::MatrixXd x(80, 2);
      for (int i = 0; i < 80; ++i) {
        const double v = rng.normal();
        xs.push_back(v);
        ys.push_back(rng.bernoulli(1.0 / (1.0 + std::exp(-(0.3 + 1.2 * v)))) ? 1.0 : 0.0);
        x(i, 0) = 1;
        x(i, 1) = v;
      }
      auto m = logistic_fit(x, names_of(2), ys);
      auto [g0, g1] = oracle::grid_logistic(xs, ys);
      CHECK(std::abs(m.coef(0) - g0) <= 1e-4);
      CHECK(std::abs(m.coef(1) - g1) <= 1e-4);
      Eigen::VectorXd resid = Eigen::Map<const Eigen::VectorXd>(ys.data(), 80) - m.predict_raw(x);
      CHECK((x.transpose() * resid).cwiseAbs().maxCoeff() < 1e-6);
    }
  }

  TEST_CASE("weighted logistic satisfies weighted score equations") {
    Rng rng(5);
    Eigen::MatrixXd x = random_design(rng, 120, 3);
    std::vector<double> y, w;
    for (int i = 0; i < 120; ++i) {
      y.push_back(rng.bernoulli(0.4 + 0.1 * (x(i, 1) > 0)) ? 1.0 : 0.0);
      w.push_back(0.5 + rng.uniform());
    }
    auto m = logistic_fit(x, names_of(3), y, w);
    const Eigen::VectorXd p = m.predict_raw(x);
    Eigen::VectorXd score = Eigen::VectorXd::Zero(3);
    for (int i = 0; i < 120; ++i) score += w[static_cast<std::size_t>(i)] * (y[static_cast<std::size_t>(i)] - p(i)) * x.row(i).transpose();
    CHECK(score.cwiseAbs().maxCoeff() < 1e-6);
  }

  TEST_CASE("logistic without signal predicts prevalence") {
    Eigen::MatrixXd x(8, 2);
    std::vector<double> y{1, 0, 0, 0, 1, 0, 0, 0};
    for (int i = 0; i < 8; ++i) {
      x(i, 0) = 1;
      x(i, 1) = i < 4 ? 0.0 : 1.0;
    }
    auto m = logistic_fit(x, names_of(2), y);
    const auto p = m.predict(x);
    for (int i = 0; i < 8; ++i) CHECK(p(i) == doctest::Approx(0.25).epsilon(1e-8));
  }

  TEST_CASE("logistic monotone in its covariate") {
    Eigen::MatrixXd x(10, 2);
    std::vector<double> y{0, 0, 0, 1, 0, 1, 0, 1, 1, 1};
    for (int i = 0; i < 10; ++i) x(i, 0) = 1, x(i, 1) = i;
    auto p = logistic_fit(x, names_of(2), y).predict(x);
    for (int i = 1; i < 10; ++i) CHECK(p(i) > p(i - 1));
  }

  TEST_CASE("separation is an error unless penalized") {
    Eigen::MatrixXd x(6, 2);
    std::vector<double> y{0, 0, 0, 1, 1, 1};
    for (int i = 0; i < 6; ++i) x(i, 0) = 1, x(i, 1) = i;
    CHECK_THROWS_AS(logistic_fit(x, names_of(2), y), SeparationError);
    bool penalized = false;
    auto m = propensity_fit(x, names_of(2), y, &penalized);
    CHECK(penalized);
    CHECK(std::isfinite(m.coef(1)));
    CHECK(m.coef(1) > 0);
  }

  TEST_CASE("boosted stumps") {
    Rng rng(6);
    Eigen::MatrixXd x(200, 1);
    std::vector<double> y;
    for (int i = 0; i < 200; ++i) {
      x(i, 0) = rng.uniform() * 4;
      const bool mid = x(i, 0) > 1 && x(i, 0) < 3;  // not monotone in x
      y.push_back(rng.bernoulli(mid ? 0.85 : 0.15) ? 1.0 : 0.0);
    }
    auto base = boosted_stumps_fit(x, y, 0, 0.1, 1);
    const double prev = std::accumulate(y.begin(), y.end(), 0.0) / 200.0;
    CHECK(base.base == doctest::Approx(std::log(prev / (1 - prev))).epsilon(1e-12));
    auto m = boosted_stumps_fit(x, y, 100, 0.1, 1);
    for (std::size_t t = 1; t < m.deviance.size(); ++t) CHECK(m.deviance[t] <= m.deviance[t - 1] + 1e-12);
    Eigen::MatrixXd xl(200, 2);
    xl << Eigen::VectorXd::Ones(200), x;
    auto lg = logistic_fit(xl, names_of(2), y);
    CHECK(bernoulli_deviance(y, m.predict_raw(x)) < bernoulli_deviance(y, lg.predict_raw(xl)));
    std::vector<double> constant(200, 1.0);
    CHECK_THROWS(boosted_stumps_fit(x, constant, 10, 0.1, 1));
  }

  TEST_CASE("standardized coefficients") {
    CHECK(standardized_coef(0.5, 0.2, 1.0) == doctest::Approx(0.1));
    CHECK_THROWS(standardized_coef(0.5, 0.0, 1.0));
    Rng rng(7);
    Frame f;
    f.rows = 60;
    std::vector<double> xv, yv, xs;
    for (int i = 0; i < 60; ++i) {
      xv.push_back(rng.normal());
      yv.push_back(0.7 * xv.back() + rng.normal());
      xs.push_back(5.0 * xv.back());
    }
    f.add("x", xv);
    f.add("xs", xs);
    f.add("y", yv);
    auto fit_std = [&](const std::string& col) {
      DesignSpec spec;
      spec.numeric = {col};
      auto d = build_design(f, spec, std::vector<std::string>{"y"});
      auto y = design_response(f, "y", d);
      auto r = ols_fit(d, y);
      return std::pair{r.coef[1], standardized_coefs(r, d, y)[1]};
    };
    auto [c1, s1] = fit_std("x");
    auto [c5, s5] = fit_std("xs");
    CHECK(c5 == doctest::Approx(c1 / 5).epsilon(1e-10));
    CHECK(s5 == doctest::Approx(s1).epsilon(1e-10));
  }

  TEST_CASE("E-values") {
    CHECK(e_value(0.0, 1.0) == 1.0);
    CHECK(e_value_rr(2.0) == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
    CHECK(e_value_rr(0.5) == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
    double last = 1.0;
    for (double c = 0.05; c < 2; c += 0.05) {
      const double e = e_value(c, 1.0);
      CHECK(e > last);
      last = e;
    }
  }

  TEST_CASE("Kolmogorov-Smirnov") {
    const std::vector<double> x{1, 2, 3}, y{2, 3, 4};
    CHECK(std::abs(ks_two_sample(x, y).statistic - 1.0 / 3.0) <= 1e-12);
    CHECK(ks_two_sample(x, x).statistic == 0.0);
    CHECK(ks_two_sample(x, x).p == doctest::Approx(1.0));
    const std::vector<double> far{10, 11};
    CHECK(ks_two_sample(x, far).statistic == 1.0);
    CHECK(kolmogorov_sf(1.0) == doctest::Approx(0.26999967).epsilon(1e-6));
    CHECK(kolmogorov_sf(1.36) == doctest::Approx(0.0494).epsilon(1e-2));
  }

  TEST_CASE("Kruskal-Wallis") {
    CHECK(std::abs(kruskal_wallis({{1, 2}, {3, 4}}).statistic - 2.4) <= 1e-12);
    CHECK(kruskal_wallis({{4, 3}, {2, 1}}).statistic == doctest::Approx(2.4).epsilon(1e-14));
    CHECK(kruskal_wallis({{1, 2, 3}, {1, 2, 3}}).statistic == doctest::Approx(0.0));
    auto flat = kruskal_wallis({{5, 5}, {5, 5, 5}});
    CHECK(flat.statistic == 0.0);
    CHECK(flat.p == 1.0);
    // Ties: [1,1,2] vs [2,3,3] against the tie-corrected formula by hand.
    // Ranks: 1.5,1.5,3.5 | 3.5,5.5,5.5; R = 6.5, 14.5; ties t = 2,2,2.
    const double h = 12.0 / 42.0 * (6.5 * 6.5 / 3 + 14.5 * 14.5 / 3) - 21.0;
    const double corr = 1.0 - 3.0 * (8 - 2) / (216.0 - 6.0);
    CHECK(kruskal_wallis({{1, 1, 2}, {2, 3, 3}}).statistic == doctest::Approx(h / corr).epsilon(1e-12));
  }

  TEST_CASE("distribution helpers") {
    CHECK(t_two_sided_p(0.0, 10) == doctest::Approx(1.0));
    CHECK(t_two_sided_p(2.228138851986, 10) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(chi2_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    auto t = paired_t_test(std::vector<double>{1, 2, 3, 4});
    CHECK(t.mean == 2.5);
    CHECK(t.t == doctest::Approx(2.5 / (std::sqrt(5.0 / 3.0) / 2.0)).epsilon(1e-12));
    CHECK(t.df == 3);
  }

  TEST_CASE("Pearson correlation") {
    Rng rng(8);
    std::vector<double> x, y;
    for (int i = 0; i < 50; ++i) {
      x.push_back(rng.normal());
      y.push_back(x.back() + rng.normal());
    }
    CHECK(pearson(x, x) == doctest::Approx(1.0).epsilon(1e-15));
    std::vector<double> neg(x);
    for (auto& v : neg) v = -v;
    CHECK(pearson(x, neg) == doctest::Approx(-1.0).epsilon(1e-15));
    const double mx = mean(x), my = mean(y);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxy += (x[i] - mx) * (y[i] - my);
      sxx += (x[i] - mx) * (x[i] - mx);
      syy += (y[i] - my) * (y[i] - my);
    }
    CHECK(std::abs(pearson(x, y) - sxy / std::sqrt(sxx * syy)) <= 1e-12);
    CHECK_THROWS(pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}));
  }

  TEST_CASE("quantiles and rounding") {
    const std::vector<double> v{4, 1, 3, 2};
    CHECK(quantile(v, 0.5) == 2.5);
    CHECK(quantile(v, 0.0) == 1.0);
    CHECK(quantile(v, 1.0) == 4.0);
    CHECK(round_to_multiple(0.25, 0.1) == doctest::Approx(0.3));
    CHECK(round_to_multiple(-0.25, 0.1) == doctest::Approx(-0.3));
    CHECK(round_to_multiple(0.04, 0.1) == 0.0);
  }

  TEST_CASE("bootstrap helpers") {
    auto ci = percentile_ci({1, 2, 3, 4, 5}, 0.5);
    CHECK(ci.first == 2.0);
    CHECK(ci.second == 4.0);
    CHECK(bootstrap_p({1, 2, 3}) == 0.0);
    CHECK(bootstrap_p({-1, 1}) == 1.0);
    auto a = bootstrap_replicates(20, 9, [](Rng& r) { return std::optional<std::vector<double>>{{r.uniform()}}; },
                                  Exec::serial);
    auto b = bootstrap_replicates(20, 9, [](Rng& r) { return std::optional<std::vector<double>>{{r.uniform()}}; });
    for (std::size_t i = 0; i < 20; ++i) CHECK((*a[i])[0] == (*b[i])[0]);
  }

  TEST_CASE("mediation identities") {
    Rng rng(10);
    Frame f;
    f.rows = 400;
    std::vector<double> t, m, y, zero_b_y, c;
    for (int i = 0; i < 400; ++i) {
      c.push_back(rng.normal());
      t.push_back(rng.normal());
      m.push_back(0.6 * t.back() + 0.2 * c.back() + 0.5 * rng.normal());
      y.push_back(0.3 * t.back() + 0.5 * m.back() + 0.1 * c.back() + 0.5 * rng.normal());
    }
    f.add("t", t);
    f.add("m", m);
    f.add("y", y);
    f.add("c", c);
    MediationSpec spec;
    spec.treatment = "t";
    spec.mediator = "m";
    spec.outcome = "y";
    spec.controls.numeric = {"c"};
    spec.bootstrap = 200;
    auto r = mediation(f, spec);
    CHECK(r.acme.estimate + r.ade.estimate == r.total.estimate);
    CHECK(r.acme.estimate == doctest::Approx(r.a * r.b).epsilon(1e-14));
    CHECK(r.acme.ci_boot.first <= 0.3);
    CHECK(r.acme.ci_boot.second >= 0.3);
    CHECK(r.replicates == 200);

    // No mediator effect: y built from t and c only, b set to zero by construction.
    std::vector<double> y0;
    for (int i = 0; i < 400; ++i) y0.push_back(0.3 * t[static_cast<std::size_t>(i)]);
    f.add("y0", y0);
    spec.outcome = "y0";
    auto r0 = mediation(f, spec);
    CHECK(std::abs(r0.acme.estimate) < 1e-12);
    CHECK(r0.ade.estimate == doctest::Approx(r0.total.estimate).epsilon(1e-12));
  }

  TEST_CASE("model specifications") {
    CHECK(parse_model_spec("S4") == ModelSpec::S4);
    CHECK_THROWS(parse_model_spec("S7"));
    auto s4 = model_design(ModelSpec::S4);
    CHECK(s4.response == "logcit_future");
    CHECK(std::find(s4.design.numeric.begin(), s4.design.numeric.end(), "ed_past") != s4.design.numeric.end());
    Frame f;
    f.rows = 3;
    f.add("logcit_future", std::vector<double>{1, 2, 3});
    CHECK_THROWS_WITH(run_model(f, ModelSpec::S5), doctest::Contains("ep_past"));
  }
}
