#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "scout/codes.hpp"
#include "scout/corpus.hpp"
#include "scout/kernels.hpp"

namespace scout {

enum class GraphKind { cooccurrence, citation, cociting };

const char* to_string(GraphKind kind);

struct Edge {
  KeyId node;
  double weight;
};

/// One unit of edge weight, 1/denom, added to (src, dst). Undirected
/// contributions carry src < dst.
struct Contribution {
  KeyId src;
  KeyId dst;
  std::uint64_t denom;

  auto operator<=>(const Contribution&) const = default;
};

/// Weighted topic graph over the topic ids of a CodeIndex. Weights and
/// strengths are summed in a canonical order, so the graph does not depend on
/// the order papers were visited.
class TopicGraph {
 public:
  TopicGraph() = default;
  TopicGraph(GraphKind kind, std::vector<std::string> node_keys, std::vector<Contribution> contributions);

  [[nodiscard]] GraphKind kind() const { return kind_; }
  [[nodiscard]] bool directed() const { return kind_ == GraphKind::citation; }
  [[nodiscard]] std::size_t node_count() const { return keys_.size(); }
  [[nodiscard]] std::size_t edge_count() const;
  [[nodiscard]] const std::string& key(KeyId i) const { return keys_[i]; }
  [[nodiscard]] std::span<const std::string> keys() const { return keys_; }

  /// Outgoing neighbours (all neighbours for undirected graphs), ascending id.
  [[nodiscard]] std::span<const Edge> out(KeyId i) const { return out_[i]; }
  /// Incoming neighbours; same as out() for undirected graphs.
  [[nodiscard]] std::span<const Edge> in(KeyId i) const { return directed() ? in_[i] : out_[i]; }
  /// w_ij (w_{i->j} when directed); 0 if absent.
  [[nodiscard]] double weight(KeyId i, KeyId j) const;

  [[nodiscard]] double strength(KeyId i) const { return out_strength_[i]; }
  [[nodiscard]] double out_strength(KeyId i) const { return out_strength_[i]; }
  [[nodiscard]] double in_strength(KeyId i) const { return directed() ? in_strength_[i] : out_strength_[i]; }

  friend bool operator==(const TopicGraph& a, const TopicGraph& b);

 private:
  GraphKind kind_ = GraphKind::cooccurrence;
  std::vector<std::string> keys_;
  std::vector<std::vector<Edge>> out_;
  std::vector<std::vector<Edge>> in_;
  std::vector<double> out_strength_;
  std::vector<double> in_strength_;
};

/// Edge contributions of the selected papers (all papers when `papers` is
/// empty and `subset` is false).
std::vector<Contribution> graph_contributions(const Corpus& corpus, const CodeIndex& index, GraphKind kind,
                                              std::span<const PaperIndex> papers, bool subset,
                                              Exec exec = Exec::parallel);

TopicGraph build_graph(const Corpus& corpus, const CodeIndex& index, GraphKind kind, Exec exec = Exec::parallel);
/// Graph restricted to `papers`; citation links need both ends inside the set.
TopicGraph build_graph(const Corpus& corpus, const CodeIndex& index, GraphKind kind,
                       std::span<const PaperIndex> papers, Exec exec = Exec::parallel);

inline TopicGraph build_cooccurrence(const Corpus& c, const CodeIndex& idx) {
  return build_graph(c, idx, GraphKind::cooccurrence);
}
inline TopicGraph build_citation(const Corpus& c, const CodeIndex& idx) {
  return build_graph(c, idx, GraphKind::citation);
}
inline TopicGraph build_cociting(const Corpus& c, const CodeIndex& idx) {
  return build_graph(c, idx, GraphKind::cociting);
}

/// CSV `src,dst,weight`; undirected edges listed once with src < dst.
void write_edges_csv(std::ostream& out, const TopicGraph& g);
/// CSV `topic,strength` or `topic,out_strength,in_strength`.
void write_strengths_csv(std::ostream& out, const TopicGraph& g);

}  // namespace scout
