#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scout/analysis.hpp"
#include "scout/corpus.hpp"
#include "scout/stats/frame.hpp"

namespace scout::causal {

struct PaperShuffleResult {
  Corpus corpus;
  std::size_t attempted = 0;
  std::size_t accepted = 0;
  std::vector<int> unchanged_years;  // years with fewer than two distinct papers or authors
};

/// Randomizes the author-paper incidence within each calendar year by
/// double-edge swaps: (p1, a1), (p2, a2) -> (p1, a2), (p2, a1). Swaps that
/// would list an author twice on a paper are rejected. Per-author yearly
/// paper counts and per-paper author counts are preserved. Each year draws
/// from its own stream derived from (seed, year).
PaperShuffleResult null_paper_shuffle(const Corpus& corpus, std::uint64_t seed, int swaps_per_edge = 10);

/// Rows with logcit_future permuted uniformly; all other fields unchanged.
std::vector<AuthorAnalysisRow> null_author_shuffle(std::vector<AuthorAnalysisRow> rows, std::uint64_t seed);

/// Frame with numeric `column` permuted uniformly.
stats::Frame shuffle_column(const stats::Frame& frame, const std::string& column, std::uint64_t seed);

/// Adds independent N(0, sigma^2) noise to numeric `column`; NaNs stay NaN
/// and values are not clipped. Throws StatsError for unknown columns.
stats::Frame perturb_gaussian(const stats::Frame& frame, const std::string& column, double sigma, std::uint64_t seed);

struct NullSummary {
  std::string kind;  // "author" or "paper"
  double observed = 0.0;
  std::size_t replicates = 0;
  std::size_t failed = 0;
  std::size_t exceed = 0;  // |null estimate| > |observed|
  double abs_p95 = 0.0;
  std::vector<double> estimates;  // NaN for failed replicates

  [[nodiscard]] std::string to_json() const;
};

/// Tallies replicate estimates against the observed one.
NullSummary summarize_null(std::string kind, double observed, std::vector<double> estimates);

}  // namespace scout::causal
