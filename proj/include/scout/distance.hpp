#pragma once

#include <atomic>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "scout/kernels.hpp"
#include "scout/topic_graph.hpp"

namespace scout {

enum class DistanceMetric { weighted_overlap, jaccard, directed_overlap };

const char* to_string(DistanceMetric m);

/// Topic distance TD = 1 - similarity, computed directly from the graph.
double topic_distance_uncached(const TopicGraph& g, DistanceMetric metric, KeyId i, KeyId j);

/// Cached topic-distance oracle shared by all per-author computations.
/// Graphs up to `full_cache_limit` nodes get a lazily filled triangular cache;
/// larger graphs use a bounded per-pair cache. Results never depend on caching
/// or on query interleaving.
class DistanceProvider {
 public:
  static constexpr std::size_t kFullCacheLimit = 8000;
  static constexpr std::size_t kPairCacheCapacity = 1 << 22;

  DistanceProvider(const TopicGraph& graph, DistanceMetric metric,
                   std::size_t full_cache_limit = kFullCacheLimit);
  DistanceProvider(const DistanceProvider&) = delete;
  DistanceProvider& operator=(const DistanceProvider&) = delete;

  [[nodiscard]] const TopicGraph& graph() const { return graph_; }
  [[nodiscard]] DistanceMetric metric() const { return metric_; }
  [[nodiscard]] bool full_cache() const { return static_cast<bool>(triangle_); }

  /// TD(i, j); throws std::out_of_range for unknown nodes.
  double distance(KeyId i, KeyId j) const;
  /// Fills the full cache (no-op without one).
  void precompute(Exec exec = Exec::parallel) const;

 private:
  [[nodiscard]] std::size_t tri_index(KeyId lo, KeyId hi) const;

  const TopicGraph& graph_;
  DistanceMetric metric_;
  std::unique_ptr<std::atomic<double>[]> triangle_;

  static constexpr std::size_t kShards = 64;
  struct Shard {
    std::mutex mu;
    std::unordered_map<std::uint64_t, double> map;
  };
  mutable std::unique_ptr<Shard[]> shards_;
};

/// Dense row-major matrix of distances over `nodes`.
struct DistanceMatrix {
  std::vector<KeyId> nodes;
  std::vector<double> values;

  [[nodiscard]] double at(std::size_t r, std::size_t c) const { return values[r * nodes.size() + c]; }
};

class MemoryBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultNodeBudget = 8000;

/// Refuses subsets above `node_budget`; use write_distance_matrix_csv to stream.
DistanceMatrix distance_matrix(const DistanceProvider& provider, std::span<const KeyId> nodes,
                               std::size_t node_budget = kDefaultNodeBudget, Exec exec = Exec::parallel);
/// Streams the matrix row by row: header row of topic keys, then one row per node.
void write_distance_matrix_csv(std::ostream& out, const DistanceProvider& provider, std::span<const KeyId> nodes);

struct PeriodStability {
  std::vector<std::string> labels;            // "all", then one per period
  std::vector<bool> degenerate;               // parallel to labels
  std::size_t common_nodes = 0;
  std::vector<std::vector<double>> correlation;  // NaN where undefined
};

/// Correlation of upper-triangle distance vectors between per-period graphs
/// and the all-papers graph, over nodes connected in every graph.
PeriodStability period_stability(const Corpus& corpus, const CodeIndex& index,
                                 const std::vector<std::pair<Date, Date>>& periods, GraphKind kind,
                                 DistanceMetric metric);

}  // namespace scout
