#include <cmath>
#include <numeric>

#include "doctest.h"
#include "scout/pipeline.hpp"
#include "scout/synthetic.hpp"
#include "scout/temporal.hpp"
#include "support.hpp"

using namespace scout;
using scout::testing::day;

namespace {

SynthResult small(const std::string& preset, int authors, std::uint64_t seed) {
  auto cfg = synth_preset(preset);
  cfg.authors = authors;
  return generate_corpus(cfg, seed);
}

}  // namespace

TEST_SUITE("temporal") {
  TEST_CASE("mean and normal interval") {
    const std::vector<double> v{1, 2, 3, 4};
    auto ci = mean_ci(v);
    const double half = 1.96 * std::sqrt(5.0 / 3.0) / 2.0;
    CHECK(ci.mean == 2.5);
    CHECK(ci.low == doctest::Approx(2.5 - half).epsilon(1e-14));
    CHECK(ci.high == doctest::Approx(2.5 + half).epsilon(1e-14));
    CHECK(std::isnan(mean_ci(std::vector<double>{1}).low));
  }

  TEST_CASE("interval width shrinks with the square root of n") {
    Rng rng(1);
    std::vector<double> a, b;
    for (int i = 0; i < 400; ++i) {
      const double v = rng.normal();
      if (i < 100) a.push_back(v);
      b.push_back(v);
    }
    const auto ca = mean_ci(a), cb = mean_ci(b);
    const double ratio = (ca.high - ca.low) / (cb.high - cb.low);
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.2));
  }

  TEST_CASE("trajectories fall when exploration decays") {
    auto s = small("decay", 400, 3);
    AnalysisSettings st;
    Workspace ws(s.corpus, st);
    auto t = temporal_trajectories(ws.metrics(), 15);
    REQUIRE(t.points.size() == 15);
    CHECK(t.authors > 50);
    CHECK(t.points[14].ep.mean < t.points[2].ep.mean);
    for (const auto& p : t.points) {
      if (p.ep.n > 0) {
        CHECK(p.ep.mean >= 0.0);
        CHECK(p.ep.mean <= 1.0);
      }
    }
    CHECK_THROWS(temporal_trajectories(ws.metrics(), 60));
  }

  TEST_CASE("cohort comparison") {
    auto s = small("cohort_shift", 1500, 4);
    AnalysisSettings st;
    Workspace ws(s.corpus, st);
    const std::vector<Cohort> cohorts{{1980, 1985}, {1986, 1991}, {1992, 1999}};
    auto cmp = cohort_compare(ws.metrics(), cohorts, 10);
    CHECK(cmp.samples.size() == 3);
    CHECK(cmp.tests.size() == 6);
    double ed_p = 1.0, ep_p = 0.0;
    for (const auto& t : cmp.tests) {
      CHECK(t.d >= 0.0);
      CHECK(t.d <= 1.0);
      if (t.a == 0 && t.b == 2) (t.metric == "ed" ? ed_p : ep_p) = t.p;
    }
    CHECK(ed_p < 1e-3);
    CHECK(ep_p > 0.01);

    auto same = cohort_compare(ws.metrics(), {{1980, 1985}, {1980, 1985}}, 10);
    for (const auto& t : same.tests) {
      CHECK(t.d == 0.0);
      CHECK(t.p == doctest::Approx(1.0));
    }
  }

  TEST_CASE("transitions conserve group sizes") {
    auto s = small("default", 400, 5);
    AnalysisSettings st;
    Workspace ws(s.corpus, st);
    const std::vector<Date> snaps{day(1992), day(1995), day(1998), day(2001)};
    auto tr = group_transitions(ws.metrics(), snaps, 50);
    REQUIRE(tr.transitions.size() == 3);
    for (std::size_t k = 0; k < tr.transitions.size(); ++k) {
      for (std::size_t from = 0; from < kGroupStates; ++from) {
        const auto row = std::accumulate(tr.transitions[k][from].begin(), tr.transitions[k][from].end(), std::size_t{0});
        std::size_t size = 0;
        for (Group g : tr.membership[k]) size += static_cast<std::size_t>(g) == from;
        CHECK(row == size);
      }
    }
    CHECK(tr.persistence_rate() >= 0.0);
    CHECK(tr.persistence_rate() <= 1.0);
    // Stable strategies keep most grouped authors where they were.
    std::size_t diag = 0, grouped = 0;
    for (std::size_t g = 0; g < 4; ++g) {
      for (std::size_t h = 0; h < 4; ++h) {
        grouped += tr.transitions.back()[g][h];
        if (g == h) diag += tr.transitions.back()[g][h];
      }
    }
    CHECK(diag * 2 > grouped);
  }

  TEST_CASE("a mid-career flip moves authors between opposite groups") {
    auto s = small("flip", 600, 6);
    AnalysisSettings st;
    Workspace ws(s.corpus, st);
    auto still = small("default", 600, 6);
    Workspace ws0(still.corpus, st);
    const std::vector<Date> snaps{day(1995), day(2012)};
    auto flip = group_transitions(ws.metrics(), snaps, 50);
    auto base = group_transitions(ws0.metrics(), snaps, 50);
    auto opposite = [](const TransitionMatrix& m) {
      return m[0][3] + m[3][0] + m[1][2] + m[2][1];  // A<->D, B<->C
    };
    CHECK(opposite(flip.transitions[0]) > opposite(base.transitions[0]));
  }
}
