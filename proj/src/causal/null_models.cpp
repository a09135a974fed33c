#include "scout/causal/null_models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "json.hpp"
#include "scout/kernels.hpp"
#include "scout/rng.hpp"
#include "scout/stats/descriptive.hpp"

namespace scout::causal {

namespace {

bool has_author(const std::vector<AuthorId>& byline, AuthorId a) {
  return std::find(byline.begin(), byline.end(), a) != byline.end();
}

}  // namespace

PaperShuffleResult null_paper_shuffle(const Corpus& corpus, std::uint64_t seed, int swaps_per_edge) {
  if (swaps_per_edge < 0) throw stats::StatsError("swaps_per_edge must be non-negative");
  std::vector<std::vector<AuthorId>> bylines;
  bylines.reserve(corpus.size());
  std::map<int, std::vector<PaperIndex>> by_year;
  for (PaperIndex p = 0; p < corpus.size(); ++p) {
    bylines.push_back(corpus.paper(p).authors);
    by_year[corpus.paper(p).date.year()].push_back(p);
  }
  std::vector<int> years;
  for (const auto& [y, _] : by_year) years.push_back(y);

  struct YearOutcome {
    std::size_t attempted = 0, accepted = 0;
    bool unchanged = false;
  };
  std::vector<YearOutcome> outcome(years.size());
  // Years touch disjoint papers, so they can be shuffled concurrently.
  run_indexed(Exec::parallel, years.size(), [&](std::size_t yi) {
    const auto& papers = by_year.at(years[yi]);
    std::vector<std::pair<PaperIndex, std::size_t>> edges;  // (paper, byline slot)
    std::set<AuthorId> authors;
    for (PaperIndex p : papers) {
      for (std::size_t s = 0; s < bylines[p].size(); ++s) {
        edges.emplace_back(p, s);
        authors.insert(bylines[p][s]);
      }
    }
    if (papers.size() < 2 || authors.size() < 2) {
      outcome[yi].unchanged = true;
      return;
    }
    Rng rng = Rng::for_replicate(seed, static_cast<std::uint64_t>(static_cast<std::int64_t>(years[yi])));
    const std::size_t attempts = edges.size() * static_cast<std::size_t>(swaps_per_edge);
    for (std::size_t t = 0; t < attempts; ++t) {
      const auto [p1, s1] = edges[rng.index(edges.size())];
      const auto [p2, s2] = edges[rng.index(edges.size())];
      ++outcome[yi].attempted;
      if (p1 == p2) continue;
      const AuthorId a1 = bylines[p1][s1];
      const AuthorId a2 = bylines[p2][s2];
      if (a1 == a2 || has_author(bylines[p1], a2) || has_author(bylines[p2], a1)) continue;
      bylines[p1][s1] = a2;
      bylines[p2][s2] = a1;
      ++outcome[yi].accepted;
    }
  });

  PaperShuffleResult result;
  for (std::size_t yi = 0; yi < years.size(); ++yi) {
    result.attempted += outcome[yi].attempted;
    result.accepted += outcome[yi].accepted;
    if (outcome[yi].unchanged) result.unchanged_years.push_back(years[yi]);
  }
  result.corpus = corpus.with_bylines(std::move(bylines));
  return result;
}

std::vector<AuthorAnalysisRow> null_author_shuffle(std::vector<AuthorAnalysisRow> rows, std::uint64_t seed) {
  std::vector<double> outcome;
  outcome.reserve(rows.size());
  for (const auto& r : rows) outcome.push_back(r.logcit_future);
  Rng rng(seed);
  rng.shuffle(std::span<double>(outcome));
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].logcit_future = outcome[i];
  return rows;
}

stats::Frame shuffle_column(const stats::Frame& frame, const std::string& column, std::uint64_t seed) {
  (void)frame.num(column);  // throws for unknown columns
  stats::Frame out = frame;
  Rng rng(seed);
  rng.shuffle(std::span<double>(out.numeric.at(column)));
  return out;
}

stats::Frame perturb_gaussian(const stats::Frame& frame, const std::string& column, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw stats::StatsError("sigma must be non-negative");
  (void)frame.num(column);  // throws for unknown columns
  stats::Frame out = frame;
  if (sigma == 0.0) return out;
  Rng rng(seed);
  for (double& v : out.numeric.at(column)) {
    const double e = rng.normal(0.0, sigma);
    if (!std::isnan(v)) v += e;
  }
  return out;
}

NullSummary summarize_null(std::string kind, double observed, std::vector<double> estimates) {
  NullSummary s;
  s.kind = std::move(kind);
  s.observed = observed;
  s.replicates = estimates.size();
  std::vector<double> abs_values;
  for (double e : estimates) {
    if (std::isnan(e)) {
      ++s.failed;
      continue;
    }
    abs_values.push_back(std::abs(e));
    if (std::abs(e) > std::abs(observed)) ++s.exceed;
  }
  s.abs_p95 = abs_values.empty() ? std::nan("") : stats::quantile(abs_values, 0.95);
  s.estimates = std::move(estimates);
  return s;
}

std::string NullSummary::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["observed"] = observed;
  j["replicates"] = replicates;
  j["failed"] = failed;
  j["exceed"] = exceed;
  j["exceed_fraction"] = replicates > failed ? static_cast<double>(exceed) / static_cast<double>(replicates - failed) : 0.0;
  if (std::isnan(abs_p95)) j["abs_p95"] = nullptr;
  else j["abs_p95"] = abs_p95;
  auto& arr = j["estimates"] = nlohmann::ordered_json::array();
  for (double e : estimates) {
    if (std::isnan(e)) arr.push_back(nullptr);
    else arr.push_back(e);
  }
  return j.dump(2);
}

}  // namespace scout::causal
