#include <bit>
#include <cstdint>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "scout/analysis.hpp"
#include "scout/distance.hpp"
#include "scout/pipeline.hpp"
#include "scout/stats/bootstrap.hpp"
#include "scout/stats/mediation.hpp"
#include "scout/stats/models.hpp"
#include "scout/synthetic.hpp"
#include "scout/topic_graph.hpp"

using namespace scout;

namespace {

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_bits(a[i], b[i])) return false;
  }
  return true;
}

const SynthResult& fixture() {
  static const SynthResult s = [] {
    auto cfg = synth_preset("small");
    cfg.authors = 300;
    return generate_corpus(cfg, 21);
  }();
  return s;
}

struct Threads {
  explicit Threads(int n) { set_threads(n); }
  ~Threads() { set_threads(0); }
};

std::string rows_csv(const RowSet& r) {
  std::ostringstream out;
  write_rows_csv(out, r.rows);
  return out.str();
}

}  // namespace

TEST_SUITE("parallel") {
  TEST_CASE("graph contributions and graphs") {
    Threads t(8);
    const auto& c = fixture().corpus;
    CodeIndex idx(c, CodeScheme{});
    for (GraphKind kind : {GraphKind::cooccurrence, GraphKind::citation, GraphKind::cociting}) {
      auto a = graph_contributions(c, idx, kind, {}, false, Exec::serial);
      auto b = graph_contributions(c, idx, kind, {}, false, Exec::parallel);
      CHECK(a == b);
      auto ga = build_graph(c, idx, kind, Exec::serial);
      auto gb = build_graph(c, idx, kind, Exec::parallel);
      CHECK(ga == gb);
      for (KeyId i = 0; i < ga.node_count(); ++i) CHECK(same_bits(ga.strength(i), gb.strength(i)));
    }
  }

  TEST_CASE("distance caches and matrices") {
    Threads t(8);
    const auto& c = fixture().corpus;
    CodeIndex idx(c, CodeScheme{});
    auto g = build_graph(c, idx, GraphKind::cociting);
    for (DistanceMetric m : {DistanceMetric::weighted_overlap, DistanceMetric::jaccard}) {
      DistanceProvider serial(g, m), parallel(g, m), lazy(g, m), paired(g, m, 0);
      serial.precompute(Exec::serial);
      parallel.precompute(Exec::parallel);
      std::vector<KeyId> nodes;
      for (KeyId i = 0; i < g.node_count(); ++i) nodes.push_back(i);
      auto ms = distance_matrix(serial, nodes, kDefaultNodeBudget, Exec::serial);
      auto mp = distance_matrix(parallel, nodes, kDefaultNodeBudget, Exec::parallel);
      auto ml = distance_matrix(lazy, nodes, kDefaultNodeBudget, Exec::parallel);
      auto mq = distance_matrix(paired, nodes, kDefaultNodeBudget, Exec::parallel);
      CHECK(same_bits(ms.values, mp.values));
      CHECK(same_bits(ms.values, ml.values));
      CHECK(same_bits(ms.values, mq.values));
    }
  }

  TEST_CASE("career profiles") {
    Threads t(8);
    const auto& c = fixture().corpus;
    CodeIndex idx(c, CodeScheme{});
    auto g = build_graph(c, idx, GraphKind::cooccurrence);
    DistanceProvider p(g, DistanceMetric::weighted_overlap);
    for (auto w : {LookbackWindow::papers(3), LookbackWindow::years(2), LookbackWindow::all()}) {
      for (DistanceMode mode : {DistanceMode::mean, DistanceMode::hausdorff}) {
        MetricsContext a(c, idx, &p, w, mode, Exec::serial);
        MetricsContext b(c, idx, &p, w, mode, Exec::parallel);
        for (std::size_t k = 0; k < c.careers().size(); ++k) {
          REQUIRE(a.profile(k).exploratory == b.profile(k).exploratory);
          REQUIRE(same_bits(a.profile(k).distance, b.profile(k).distance));
        }
      }
    }
  }

  TEST_CASE("workspace rows") {
    Threads t(8);
    const auto& c = fixture().corpus;
    AnalysisSettings st;
    st.split.value = 4;
    Workspace a(c, st, Exec::serial), b(c, st, Exec::parallel);
    auto ra = a.rows(), rb = b.rows();
    CHECK(ra.rows.size() > 50);
    CHECK(rows_csv(ra) == rows_csv(rb));
    CHECK(ra.split_excluded == rb.split_excluded);
  }

  TEST_CASE("bootstrap replicates and model intervals") {
    Threads t(8);
    const auto& c = fixture().corpus;
    AnalysisSettings st;
    st.split.value = 4;
    Workspace ws(c, st);
    auto frame = to_frame(ws.rows().rows);
    auto fit = stats::run_model(frame, stats::ModelSpec::S4);
    auto a = stats::bootstrap_model(frame, stats::ModelSpec::S4, {}, fit, 60, 5, 0.95, Exec::serial);
    auto b = stats::bootstrap_model(frame, stats::ModelSpec::S4, {}, fit, 60, 5, 0.95, Exec::parallel);
    CHECK(same_bits(a.ci_low, b.ci_low));
    CHECK(same_bits(a.ci_high, b.ci_high));
    CHECK(a.failed == b.failed);

    auto draw = [](Rng& r) { return std::optional<std::vector<double>>{{r.normal(), r.uniform()}}; };
    auto ra = stats::bootstrap_replicates(100, 3, draw, Exec::serial);
    auto rb = stats::bootstrap_replicates(100, 3, draw, Exec::parallel);
    for (std::size_t i = 0; i < 100; ++i) CHECK(same_bits(*ra[i], *rb[i]));

    stats::MediationSpec spec;
    spec.treatment = "ep_past";
    spec.mediator = "logcit_past";
    spec.outcome = "logcit_future";
    spec.bootstrap = 40;
    auto ma = stats::mediation(frame, spec, Exec::serial);
    auto mb = stats::mediation(frame, spec, Exec::parallel);
    CHECK(same_bits(ma.acme.ci_boot.first, mb.acme.ci_boot.first));
    CHECK(same_bits(ma.acme.ci_boot.second, mb.acme.ci_boot.second));
  }

  TEST_CASE("thread count does not change results") {
    const auto& c = fixture().corpus;
    AnalysisSettings st;
    std::string one, many;
    {
      Threads t(1);
      Workspace ws(c, st);
      one = rows_csv(ws.rows());
    }
    {
      Threads t(8);
      Workspace ws(c, st);
      many = rows_csv(ws.rows());
    }
    CHECK(one == many);
  }
}
