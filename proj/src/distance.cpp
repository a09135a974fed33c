#include "scout/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "scout/format.hpp"
#include "scout/stats/descriptive.hpp"

namespace scout {

const char* to_string(DistanceMetric m) {
  switch (m) {
    case DistanceMetric::weighted_overlap: return "weighted_overlap";
    case DistanceMetric::jaccard: return "jaccard";
    case DistanceMetric::directed_overlap: return "directed_overlap";
  }
  return "?";
}

namespace {

// Sum over common neighbours k of (w_ak + w_bk) / 2, visited in ascending k.
double shared_weight(std::span<const Edge> a, std::span<const Edge> b) {
  double w = 0.0;
  std::size_t x = 0, y = 0;
  while (x < a.size() && y < b.size()) {
    if (a[x].node < b[y].node) {
      ++x;
    } else if (b[y].node < a[x].node) {
      ++y;
    } else {
      w += (a[x].weight + b[y].weight) / 2.0;
      ++x;
      ++y;
    }
  }
  return w;
}

double overlap(double shared, double denom) {
  if (shared == 0.0) return 0.0;
  if (denom <= 0.0) return 1.0;
  return std::clamp(shared / denom, 0.0, 1.0);
}

}  // namespace

double topic_distance_uncached(const TopicGraph& g, DistanceMetric metric, KeyId i, KeyId j) {
  if (i >= g.node_count() || j >= g.node_count()) throw std::out_of_range("unknown topic node");
  if (i == j) return 0.0;
  const KeyId lo = std::min(i, j), hi = std::max(i, j);
  switch (metric) {
    case DistanceMetric::weighted_overlap: {
      const double shared = shared_weight(g.out(lo), g.out(hi));
      const double denom = g.strength(lo) + g.strength(hi) - 2.0 * g.weight(lo, hi) - shared;
      return 1.0 - overlap(shared, denom);
    }
    case DistanceMetric::jaccard: {
      const auto a = g.out(lo), b = g.out(hi);
      std::size_t common = 0, x = 0, y = 0;
      while (x < a.size() && y < b.size()) {
        if (a[x].node < b[y].node) {
          ++x;
        } else if (b[y].node < a[x].node) {
          ++y;
        } else {
          ++common, ++x, ++y;
        }
      }
      const std::size_t uni = a.size() + b.size() - common;
      if (uni == 0) return 1.0;
      return 1.0 - static_cast<double>(common) / static_cast<double>(uni);
    }
    case DistanceMetric::directed_overlap: {
      // Both reciprocal weights are subtracted in each direction.
      const double mutual = g.weight(lo, hi) + g.weight(hi, lo);
      const double w_out = shared_weight(g.out(lo), g.out(hi));
      const double w_in = shared_weight(g.in(lo), g.in(hi));
      const double o_out = overlap(w_out, g.out_strength(lo) + g.out_strength(hi) - mutual - w_out);
      const double o_in = overlap(w_in, g.in_strength(lo) + g.in_strength(hi) - mutual - w_in);
      return 1.0 - (o_out + o_in) / 2.0;
    }
  }
  return 1.0;
}

DistanceProvider::DistanceProvider(const TopicGraph& graph, DistanceMetric metric, std::size_t full_cache_limit)
    : graph_(graph), metric_(metric) {
  if (metric == DistanceMetric::directed_overlap && !graph.directed()) {
    throw std::invalid_argument("directed_overlap needs a directed (citation) graph");
  }
  const std::size_t n = graph.node_count();
  if (n <= full_cache_limit) {
    const std::size_t m = n * (n - (n > 0 ? 1 : 0)) / 2;
    triangle_ = std::make_unique<std::atomic<double>[]>(m);
    for (std::size_t k = 0; k < m; ++k) triangle_[k].store(std::numeric_limits<double>::quiet_NaN());
  } else {
    shards_ = std::make_unique<Shard[]>(kShards);
  }
}

std::size_t DistanceProvider::tri_index(KeyId lo, KeyId hi) const {
  // Row-major strict upper triangle.
  const std::size_t n = graph_.node_count();
  return static_cast<std::size_t>(lo) * (2 * n - lo - 1) / 2 + (hi - lo - 1);
}

double DistanceProvider::distance(KeyId i, KeyId j) const {
  const std::size_t n = graph_.node_count();
  if (i >= n || j >= n) throw std::out_of_range("unknown topic node");
  if (i == j) return 0.0;
  const KeyId lo = std::min(i, j), hi = std::max(i, j);
  if (triangle_) {
    auto& slot = triangle_[tri_index(lo, hi)];
    double v = slot.load(std::memory_order_relaxed);
    if (std::isnan(v)) {
      v = topic_distance_uncached(graph_, metric_, lo, hi);
      slot.store(v, std::memory_order_relaxed);
    }
    return v;
  }
  const std::uint64_t key = (static_cast<std::uint64_t>(lo) << 32) | hi;
  Shard& shard = shards_[key % kShards];
  {
    std::lock_guard lock(shard.mu);
    auto it = shard.map.find(key);
    if (it != shard.map.end()) return it->second;
  }
  const double v = topic_distance_uncached(graph_, metric_, lo, hi);
  std::lock_guard lock(shard.mu);
  if (shard.map.size() >= kPairCacheCapacity / kShards) shard.map.clear();
  shard.map.emplace(key, v);
  return v;
}

void DistanceProvider::precompute(Exec exec) const {
  if (!triangle_) return;
  const std::size_t n = graph_.node_count();
  run_indexed(exec, n, [&](std::size_t lo) {
    for (std::size_t hi = lo + 1; hi < n; ++hi) {
      triangle_[tri_index(static_cast<KeyId>(lo), static_cast<KeyId>(hi))].store(
          topic_distance_uncached(graph_, metric_, static_cast<KeyId>(lo), static_cast<KeyId>(hi)),
          std::memory_order_relaxed);
    }
  });
}

DistanceMatrix distance_matrix(const DistanceProvider& provider, std::span<const KeyId> nodes,
                               std::size_t node_budget, Exec exec) {
  if (nodes.size() > node_budget) {
    throw MemoryBudgetError("distance matrix over " + std::to_string(nodes.size()) + " nodes exceeds budget of " +
                            std::to_string(node_budget) + "; use streaming export");
  }
  DistanceMatrix m;
  m.nodes.assign(nodes.begin(), nodes.end());
  const std::size_t k = nodes.size();
  m.values.assign(k * k, 0.0);
  run_indexed(exec, k, [&](std::size_t r) {
    for (std::size_t c = 0; c < k; ++c) m.values[r * k + c] = provider.distance(nodes[r], nodes[c]);
  });
  return m;
}

void write_distance_matrix_csv(std::ostream& out, const DistanceProvider& provider, std::span<const KeyId> nodes) {
  const auto& g = provider.graph();
  out << "topic";
  for (KeyId n : nodes) out << ',' << csv_field(g.key(n));
  out << '\n';
  for (KeyId r : nodes) {
    out << csv_field(g.key(r));
    for (KeyId c : nodes) out << ',' << fmt_double(provider.distance(r, c));
    out << '\n';
  }
}

PeriodStability period_stability(const Corpus& corpus, const CodeIndex& index,
                                 const std::vector<std::pair<Date, Date>>& periods, GraphKind kind,
                                 DistanceMetric metric) {
  if (periods.size() < 2) throw std::invalid_argument("period_stability needs at least two periods");
  PeriodStability out;
  std::vector<TopicGraph> graphs;
  graphs.push_back(build_graph(corpus, index, kind));
  out.labels.push_back("all");
  out.degenerate.push_back(false);
  for (const auto& [from, to] : periods) {
    std::vector<PaperIndex> papers;
    std::size_t multi = 0;
    for (PaperIndex p = 0; p < corpus.size(); ++p) {
      const Date d = corpus.paper(p).date;
      if (d < from || d > to) continue;
      papers.push_back(p);
      if (index.paper_topics(p).size() >= 2) ++multi;
    }
    graphs.push_back(build_graph(corpus, index, kind, papers));
    out.labels.push_back(from.to_string() + ".." + to.to_string());
    out.degenerate.push_back(multi < 2);
  }

  const std::size_t n = index.topics().size();
  std::vector<KeyId> common;
  for (KeyId t = 0; t < n; ++t) {
    bool everywhere = true;
    for (std::size_t g = 0; g < graphs.size() && everywhere; ++g) {
      if (out.degenerate[g]) continue;
      everywhere = !graphs[g].out(t).empty() || !graphs[g].in(t).empty();
    }
    if (everywhere) common.push_back(t);
  }
  out.common_nodes = common.size();

  std::vector<std::vector<double>> vecs(graphs.size());
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    if (out.degenerate[g]) continue;
    DistanceProvider dp(graphs[g], metric);
    for (std::size_t a = 0; a < common.size(); ++a) {
      for (std::size_t b = a + 1; b < common.size(); ++b) vecs[g].push_back(dp.distance(common[a], common[b]));
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.correlation.assign(graphs.size(), std::vector<double>(graphs.size(), nan));
  for (std::size_t a = 0; a < graphs.size(); ++a) {
    for (std::size_t b = 0; b < graphs.size(); ++b) {
      if (out.degenerate[a] || out.degenerate[b] || vecs[a].size() < 2) continue;
      if (a == b) {
        out.correlation[a][b] = 1.0;
        continue;
      }
      auto r = stats::try_pearson(vecs[a], vecs[b]);
      if (r) out.correlation[a][b] = *r;
    }
  }
  return out;
}

}  // namespace scout
