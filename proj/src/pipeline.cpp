#include "scout/pipeline.hpp"

namespace scout {

Workspace::Workspace(const Corpus& corpus, const AnalysisSettings& settings, Exec exec)
    : corpus_(corpus), settings_(settings), exec_(exec) {
  settings_.scheme.validate();
  settings_.window.validate();
  settings_.split.validate();
  index_ = std::make_shared<CodeIndex>(corpus_, settings_.scheme);
  graph_ = std::make_shared<TopicGraph>(build_graph(corpus_, *index_, settings_.graph, exec_));
  provider_ = std::make_shared<DistanceProvider>(*graph_, settings_.metric);
  metrics_ = std::make_unique<MetricsContext>(corpus_, *index_, provider_.get(), settings_.window, settings_.mode, exec_);
  impact_ = std::make_unique<ImpactTable>(corpus_, *index_, settings_.impact);
}

Workspace::Workspace(const Corpus& corpus, const Workspace& base, Exec exec)
    : corpus_(corpus),
      settings_(base.settings_),
      exec_(exec),
      index_(base.index_),
      graph_(base.graph_),
      provider_(base.provider_) {
  metrics_ = std::make_unique<MetricsContext>(corpus_, *index_, provider_.get(), settings_.window, settings_.mode, exec_);
  impact_ = std::make_unique<ImpactTable>(corpus_, *index_, settings_.impact);
}

RowSet Workspace::rows(std::optional<SplitPoint> split, bool future_metrics) const {
  RowOptions opts;
  opts.split = split.value_or(settings_.split);
  opts.future_metrics = future_metrics;
  opts.covariates = settings_.covariates;
  RowSet set = build_rows(*metrics_, *impact_, opts, exec_);
  assign_groups(set.rows, settings_.quantile);
  return set;
}

}  // namespace scout
