#include "scout/topic_graph.hpp"

#include <algorithm>
#include <ostream>

#include "scout/format.hpp"

namespace scout {

const char* to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::cooccurrence: return "cooccurrence";
    case GraphKind::citation: return "citation";
    case GraphKind::cociting: return "cociting";
  }
  return "?";
}

namespace {

struct Tally {
  std::uint64_t denom;
  std::uint64_t count;
};

// Sum of count/denom with equal denominators merged first; exact whenever
// every count is a multiple of its denominator.
double tally_sum(std::vector<Tally>& t) {
  std::sort(t.begin(), t.end(), [](const Tally& a, const Tally& b) { return a.denom < b.denom; });
  double s = 0.0;
  for (std::size_t i = 0; i < t.size();) {
    std::uint64_t c = 0;
    std::size_t j = i;
    for (; j < t.size() && t[j].denom == t[i].denom; ++j) c += t[j].count;
    s += static_cast<double>(c) / static_cast<double>(t[i].denom);
    i = j;
  }
  return s;
}

}  // namespace

TopicGraph::TopicGraph(GraphKind kind, std::vector<std::string> node_keys, std::vector<Contribution> contributions)
    : kind_(kind), keys_(std::move(node_keys)) {
  const std::size_t n = keys_.size();
  out_.assign(n, {});
  if (directed()) in_.assign(n, {});
  std::vector<std::vector<Tally>> out_hist(n), in_hist(directed() ? n : 0);

  std::sort(contributions.begin(), contributions.end());
  std::vector<Tally> edge_tally;
  for (std::size_t i = 0; i < contributions.size();) {
    const KeyId s = contributions[i].src, d = contributions[i].dst;
    edge_tally.clear();
    std::size_t j = i;
    while (j < contributions.size() && contributions[j].src == s && contributions[j].dst == d) {
      std::size_t k = j;
      while (k < contributions.size() && contributions[k] == contributions[j]) ++k;
      edge_tally.push_back({contributions[j].denom, k - j});
      out_hist[s].push_back(edge_tally.back());
      if (directed()) {
        in_hist[d].push_back(edge_tally.back());
      } else {
        out_hist[d].push_back(edge_tally.back());
      }
      j = k;
    }
    const double w = tally_sum(edge_tally);
    out_[s].push_back({d, w});
    if (directed()) {
      in_[d].push_back({s, w});
    } else {
      out_[d].push_back({s, w});
    }
    i = j;
  }
  auto by_node = [](const Edge& a, const Edge& b) { return a.node < b.node; };
  for (auto& v : out_) std::sort(v.begin(), v.end(), by_node);
  for (auto& v : in_) std::sort(v.begin(), v.end(), by_node);

  out_strength_.resize(n);
  for (std::size_t i = 0; i < n; ++i) out_strength_[i] = tally_sum(out_hist[i]);
  if (directed()) {
    in_strength_.resize(n);
    for (std::size_t i = 0; i < n; ++i) in_strength_[i] = tally_sum(in_hist[i]);
  }
}

std::size_t TopicGraph::edge_count() const {
  std::size_t m = 0;
  for (const auto& v : out_) m += v.size();
  return directed() ? m : m / 2;
}

double TopicGraph::weight(KeyId i, KeyId j) const {
  const auto& v = out_[i];
  auto it = std::lower_bound(v.begin(), v.end(), j, [](const Edge& e, KeyId k) { return e.node < k; });
  return it != v.end() && it->node == j ? it->weight : 0.0;
}

bool operator==(const TopicGraph& a, const TopicGraph& b) {
  auto same = [](const std::vector<std::vector<Edge>>& x, const std::vector<std::vector<Edge>>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].size() != y[i].size()) return false;
      for (std::size_t k = 0; k < x[i].size(); ++k) {
        if (x[i][k].node != y[i][k].node || x[i][k].weight != y[i][k].weight) return false;
      }
    }
    return true;
  };
  return a.kind_ == b.kind_ && a.keys_ == b.keys_ && same(a.out_, b.out_) && same(a.in_, b.in_) &&
         a.out_strength_ == b.out_strength_ && a.in_strength_ == b.in_strength_;
}

std::vector<Contribution> graph_contributions(const Corpus& corpus, const CodeIndex& index, GraphKind kind,
                                              std::span<const PaperIndex> papers, bool subset, Exec exec) {
  const std::size_t n = corpus.size();
  std::vector<bool> member(n, !subset);
  if (subset) {
    for (PaperIndex p : papers) member[p] = true;
  }
  std::vector<std::vector<Contribution>> per_paper(n);

  run_indexed(exec, n, [&](std::size_t pi) {
    if (!member[pi]) return;
    const auto p = static_cast<PaperIndex>(pi);
    auto& out = per_paper[pi];
    switch (kind) {
      case GraphKind::cooccurrence: {
        const auto t = index.paper_topics(p);
        if (t.size() < 2) return;
        const std::uint64_t d = t.size() - 1;
        for (std::size_t a = 0; a < t.size(); ++a) {
          for (std::size_t b = a + 1; b < t.size(); ++b) out.push_back({t[a], t[b], d});
        }
        break;
      }
      case GraphKind::citation: {
        const auto ti = index.paper_topics(p);
        if (ti.empty()) return;
        const auto& paper = corpus.paper(p);
        const std::uint64_t base = ti.size() * paper.reference_count();
        for (PaperIndex r : paper.refs) {
          if (!member[r]) continue;
          const auto tj = index.paper_topics(r);
          for (KeyId a : ti) {
            for (KeyId b : tj) {
              if (a != b) out.push_back({a, b, base * tj.size()});
            }
          }
        }
        break;
      }
      case GraphKind::cociting: {
        std::vector<PaperIndex> citers;
        for (PaperIndex c : corpus.citers(p)) {
          if (member[c] && !index.paper_topics(c).empty()) citers.push_back(c);
        }
        for (std::size_t x = 0; x < citers.size(); ++x) {
          const auto ti = index.paper_topics(citers[x]);
          for (std::size_t y = x + 1; y < citers.size(); ++y) {
            const auto tj = index.paper_topics(citers[y]);
            const std::uint64_t d = ti.size() * tj.size();
            for (KeyId a : ti) {
              for (KeyId b : tj) {
                if (a != b) out.push_back({std::min(a, b), std::max(a, b), d});
              }
            }
          }
        }
        break;
      }
    }
  });

  std::size_t total = 0;
  for (const auto& v : per_paper) total += v.size();
  std::vector<Contribution> all;
  all.reserve(total);
  for (auto& v : per_paper) all.insert(all.end(), v.begin(), v.end());
  return all;
}

TopicGraph build_graph(const Corpus& corpus, const CodeIndex& index, GraphKind kind, Exec exec) {
  auto keys = std::vector<std::string>(index.topics().begin(), index.topics().end());
  return TopicGraph(kind, std::move(keys), graph_contributions(corpus, index, kind, {}, false, exec));
}

TopicGraph build_graph(const Corpus& corpus, const CodeIndex& index, GraphKind kind,
                       std::span<const PaperIndex> papers, Exec exec) {
  auto keys = std::vector<std::string>(index.topics().begin(), index.topics().end());
  return TopicGraph(kind, std::move(keys), graph_contributions(corpus, index, kind, papers, true, exec));
}

void write_edges_csv(std::ostream& out, const TopicGraph& g) {
  out << "src,dst,weight\n";
  for (KeyId i = 0; i < g.node_count(); ++i) {
    for (const Edge& e : g.out(i)) {
      if (!g.directed() && e.node < i) continue;
      out << csv_field(g.key(i)) << ',' << csv_field(g.key(e.node)) << ',' << fmt_double(e.weight) << '\n';
    }
  }
}

void write_strengths_csv(std::ostream& out, const TopicGraph& g) {
  out << (g.directed() ? "topic,out_strength,in_strength\n" : "topic,strength\n");
  for (KeyId i = 0; i < g.node_count(); ++i) {
    out << csv_field(g.key(i)) << ',' << fmt_double(g.out_strength(i));
    if (g.directed()) out << ',' << fmt_double(g.in_strength(i));
    out << '\n';
  }
}

}  // namespace scout
