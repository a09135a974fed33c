#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scout/codes.hpp"
#include "scout/corpus.hpp"
#include "scout/distance.hpp"
#include "scout/kernels.hpp"

namespace scout {

struct LookbackWindow {
  enum class Mode { papers, years, all };
  Mode mode = Mode::papers;
  int j = 5;
  int k = 5;

  static LookbackWindow papers(int j) { return {Mode::papers, j, 5}; }
  static LookbackWindow years(int k) { return {Mode::years, 5, k}; }
  static LookbackWindow all() { return {Mode::all, 5, 5}; }
  void validate() const;
  [[nodiscard]] std::string label() const;
};

struct SplitPoint {
  enum class Mode { career_years, paper_count };
  Mode mode = Mode::career_years;
  int value = 10;
  std::optional<int> min_past;  // default: 5 for career years, `value` for paper count
  int min_future = 3;

  static SplitPoint career_years(int n) { return {Mode::career_years, n, std::nullopt, 3}; }
  static SplitPoint paper_count(int m) { return {Mode::paper_count, m, std::nullopt, 3}; }
  void validate() const;
  [[nodiscard]] int effective_min_past() const;
  [[nodiscard]] std::string label() const;
};

enum class DistanceMode { mean, hausdorff };

/// ln(1 + count).
double log_citations(std::size_t count);

/// Positions (into `dates`) of the look-back papers of paper `i`.
std::vector<std::size_t> lookback_positions(std::span<const Date> dates, std::size_t i, const LookbackWindow& w);

/// Exploratory flag per paper; the first entry is always false and is not
/// counted by ep().
std::vector<bool> exploratory_flags(std::span<const std::vector<KeyId>> area_sets, std::span<const Date> dates,
                                    const LookbackWindow& w);

/// Distance of one paper's topic set to the union of its look-back topics;
/// nullopt if either set is empty.
std::optional<double> paper_distance(std::span<const KeyId> topics, std::span<const KeyId> lookback_topics,
                                     const DistanceProvider& provider, DistanceMode mode);

/// Per-paper exploration record of one paper sequence.
struct CareerProfile {
  std::vector<std::uint8_t> exploratory;  // entry 0 unused
  std::vector<double> distance;           // NaN when undefined; entry 0 unused
};

CareerProfile career_profile(const CodeIndex& index, std::span<const PaperIndex> papers, std::span<const Date> dates,
                             const DistanceProvider* provider, const LookbackWindow& w, DistanceMode mode);
CareerProfile career_profile(const Corpus& corpus, const CodeIndex& index, std::span<const PaperIndex> papers,
                             const DistanceProvider* provider, const LookbackWindow& w, DistanceMode mode);

struct ExplorationMetrics {
  std::optional<double> ep;
  std::optional<double> ed;
  std::size_t papers = 0;
  std::size_t exploratory = 0;
  std::size_t undefined_distances = 0;
};

/// EP/ED over the first `m` papers of a profile.
ExplorationMetrics prefix_metrics(const CareerProfile& profile, std::size_t m);

/// EP/ED of a paper sequence, optionally restricted to papers dated before `up_to`.
ExplorationMetrics exploration_metrics(const Corpus& corpus, const CodeIndex& index,
                                       std::span<const PaperIndex> papers, const DistanceProvider* provider,
                                       const LookbackWindow& w, DistanceMode mode,
                                       std::optional<Date> up_to = std::nullopt);

std::optional<double> ep(const Corpus& corpus, const CodeIndex& index, const AuthorCareer& career,
                         const LookbackWindow& w, std::optional<Date> up_to = std::nullopt);
std::optional<double> ed(const Corpus& corpus, const CodeIndex& index, const AuthorCareer& career,
                         const DistanceProvider& provider, const LookbackWindow& w, DistanceMode mode,
                         std::optional<Date> up_to = std::nullopt);

struct SplitResult {
  bool eligible = false;
  std::size_t past = 0;  // number of papers before the split
  std::size_t future = 0;
};

/// Partition of a career at `split`; past papers are career[0, past).
SplitResult split_author(const Corpus& corpus, const AuthorCareer& career, const SplitPoint& split);
SplitResult split_author(std::span<const Date> dates, const SplitPoint& split);

/// Profiles of every eligible career under one window and distance setting.
class MetricsContext {
 public:
  MetricsContext(const Corpus& corpus, const CodeIndex& index, const DistanceProvider* provider,
                 LookbackWindow window, DistanceMode mode, Exec exec = Exec::parallel);

  [[nodiscard]] const Corpus& corpus() const { return corpus_; }
  [[nodiscard]] const CodeIndex& index() const { return index_; }
  [[nodiscard]] const DistanceProvider* provider() const { return provider_; }
  [[nodiscard]] const LookbackWindow& window() const { return window_; }
  [[nodiscard]] DistanceMode mode() const { return mode_; }
  /// Parallel to corpus.careers().
  [[nodiscard]] const CareerProfile& profile(std::size_t career) const { return profiles_[career]; }

 private:
  const Corpus& corpus_;
  const CodeIndex& index_;
  const DistanceProvider* provider_;
  LookbackWindow window_;
  DistanceMode mode_;
  std::vector<CareerProfile> profiles_;
};

}  // namespace scout
