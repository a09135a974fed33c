#pragma once

#include <memory>

#include "scout/analysis.hpp"
#include "scout/codes.hpp"
#include "scout/corpus.hpp"
#include "scout/distance.hpp"
#include "scout/impact.hpp"
#include "scout/metrics.hpp"
#include "scout/topic_graph.hpp"

namespace scout {

/// Choices that determine analysis rows from a corpus.
struct AnalysisSettings {
  CodeScheme scheme;
  GraphKind graph = GraphKind::cooccurrence;
  DistanceMetric metric = DistanceMetric::weighted_overlap;
  LookbackWindow window;
  DistanceMode mode = DistanceMode::mean;
  ImpactKind impact = ImpactKind::log_c5;
  SplitPoint split;
  double quantile = 50.0;
  CovariateConfig covariates;
};

/// Code index, topic graph, distances, per-career profiles and impact table
/// of one corpus under one set of analysis settings.
class Workspace {
 public:
  Workspace(const Corpus& corpus, const AnalysisSettings& settings, Exec exec = Exec::parallel);
  /// Reuses `base`'s code index and topic graph for a corpus with the same
  /// papers (e.g. reshuffled bylines).
  Workspace(const Corpus& corpus, const Workspace& base, Exec exec = Exec::parallel);

  [[nodiscard]] const Corpus& corpus() const { return corpus_; }
  [[nodiscard]] const AnalysisSettings& settings() const { return settings_; }
  [[nodiscard]] const CodeIndex& index() const { return *index_; }
  [[nodiscard]] const TopicGraph& graph() const { return *graph_; }
  [[nodiscard]] const DistanceProvider& provider() const { return *provider_; }
  [[nodiscard]] const MetricsContext& metrics() const { return *metrics_; }
  [[nodiscard]] const ImpactTable& impact() const { return *impact_; }

  /// Rows at `split` (default: the settings' split), grouped on past metrics.
  [[nodiscard]] RowSet rows(std::optional<SplitPoint> split = std::nullopt, bool future_metrics = true) const;

 private:
  const Corpus& corpus_;
  AnalysisSettings settings_;
  Exec exec_;
  std::shared_ptr<const CodeIndex> index_;
  std::shared_ptr<const TopicGraph> graph_;
  std::shared_ptr<const DistanceProvider> provider_;
  std::unique_ptr<MetricsContext> metrics_;
  std::unique_ptr<ImpactTable> impact_;
};

}  // namespace scout
