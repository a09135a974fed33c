// Serial vs parallel timings of the data-parallel kernels.
//   bench_kernels [authors] [threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "scout/analysis.hpp"
#include "scout/distance.hpp"
#include "scout/pipeline.hpp"
#include "scout/stats/models.hpp"
#include "scout/synthetic.hpp"
#include "scout/topic_graph.hpp"

using namespace scout;

namespace {

double time_it(const std::function<void()>& fn, int repeat = 3) {
  double best = 1e300;
  for (int r = 0; r < repeat; ++r) {
    const auto t = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count());
  }
  return best;
}

void report(const char* name, const std::function<void(Exec)>& fn) {
  const double s = time_it([&] { fn(Exec::serial); });
  const double p = time_it([&] { fn(Exec::parallel); });
  std::printf("%-22s serial %9.4f s  parallel %9.4f s  speedup %5.2fx\n", name, s, p, s / p);
}

}  // namespace

int main(int argc, char** argv) {
  const int authors = argc > 1 ? std::atoi(argv[1]) : 1000;
  if (argc > 2) set_threads(std::atoi(argv[2]));
  std::printf("authors %d, threads %d\n", authors, thread_count());

  auto cfg = synth_preset("default");
  cfg.authors = authors;
  const auto s = generate_corpus(cfg, 1);
  const Corpus& c = s.corpus;
  CodeIndex idx(c, CodeScheme{});
  const auto g = build_cooccurrence(c, idx);
  std::printf("papers %zu, topics %zu, edges %zu\n", c.size(), g.node_count(), g.edge_count());

  report("cociting graph", [&](Exec e) { build_graph(c, idx, GraphKind::cociting, e); });
  report("distance precompute", [&](Exec e) {
    DistanceProvider p(g, DistanceMetric::weighted_overlap);
    p.precompute(e);
  });
  DistanceProvider provider(g, DistanceMetric::weighted_overlap);
  provider.precompute();
  report("career profiles", [&](Exec e) {
    MetricsContext ctx(c, idx, &provider, LookbackWindow::papers(5), DistanceMode::hausdorff, e);
  });
  AnalysisSettings st;
  const Workspace ws(c, st);
  const auto frame = to_frame(ws.rows().rows);
  const auto fit = stats::run_model(frame, stats::ModelSpec::S4);
  report("bootstrap S4 x200", [&](Exec e) { stats::bootstrap_model(frame, stats::ModelSpec::S4, {}, fit, 200, 1, 0.95, e); });
  return 0;
}
