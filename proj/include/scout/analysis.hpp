#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "scout/impact.hpp"
#include "scout/metrics.hpp"
#include "scout/stats/frame.hpp"

namespace scout {

enum class Group { A, B, C, D, excluded };

const char* to_string(Group g);
/// Group from EP / ED levels: A = high EP & low ED, B = low & low, C = high & high, D = low EP & high ED.
Group group_of(bool high_ep, bool high_ed);

struct AuthorAnalysisRow {
  std::string author_id;
  std::size_t career = 0;  // index into Corpus::careers()
  double ep_past = 0.0;
  double ed_past = 0.0;
  double ep_future = 0.0;  // NaN when not computed or undefined
  double ed_future = 0.0;
  double logcit_past = 0.0;
  double logcit_future = 0.0;
  int p_past = 0;
  int p_future = 0;
  std::string year_first;
  std::string area_first;
  Group group = Group::excluded;
  std::map<std::string, double> covariates;       // NaN = missing
  std::map<std::string, std::string> attributes;  // author attributes, e.g. gender
};

struct CovariateConfig {
  bool enabled = false;
  std::vector<std::string> ivy_institutions;
  int importation_lookback = 5;
};

struct RowOptions {
  SplitPoint split;
  bool future_metrics = true;
  CovariateConfig covariates;
};

struct RowSet {
  std::vector<AuthorAnalysisRow> rows;
  std::size_t careers = 0;
  std::size_t split_excluded = 0;
  std::size_t metric_undefined = 0;
};

/// One row per career eligible at the split with defined past EP and ED.
RowSet build_rows(const MetricsContext& ctx, const ImpactTable& impact, const RowOptions& options,
                  Exec exec = Exec::parallel);

/// Covariates of one side (`papers`) of an author's career, suffixed by `suffix`.
class CovariateBuilder {
 public:
  CovariateBuilder(const Corpus& corpus, const CodeIndex& index, CovariateConfig config);

  void add(std::map<std::string, double>& out, AuthorId author, std::span<const PaperIndex> papers,
           const std::string& suffix) const;

  [[nodiscard]] double popularity(KeyId area, int year) const;
  /// (I_focal, I_other) of `author` on paper `p`.
  [[nodiscard]] std::pair<std::size_t, std::size_t> importation(AuthorId author, PaperIndex p) const;

 private:
  [[nodiscard]] std::vector<KeyId> recent_topics(AuthorId author, PaperIndex before) const;

  const Corpus& corpus_;
  const CodeIndex& index_;
  CovariateConfig config_;
  std::map<std::pair<KeyId, int>, double> popularity_;
  std::vector<std::string> external_names_;
};

struct GroupingInfo {
  double ep_high = 0.0, ep_low = 0.0, ed_high = 0.0, ed_low = 0.0;
  bool degenerate_ep = false;
  bool degenerate_ed = false;
  std::array<std::size_t, 5> counts{};  // A, B, C, D, excluded
};

/// Level of each value: +1 when >= the (1 - Q/100) quantile, else -1 when
/// <= the Q/100 quantile, else 0. NaN values get 0.
std::vector<int> quantile_levels(std::span<const double> values, double quantile_pct, double* high = nullptr,
                                 double* low = nullptr, bool* degenerate = nullptr);

std::vector<Group> assign_groups(std::span<const double> ep, std::span<const double> ed, double quantile_pct,
                                 GroupingInfo* info = nullptr);
/// Labels rows from past (or future) EP/ED.
GroupingInfo assign_groups(std::vector<AuthorAnalysisRow>& rows, double quantile_pct, bool on_future = false);

/// Numeric columns: ep/ed/logcit past and future, p_past, p_future, covariates.
/// Categorical: author_id, year_first, area_first, group, attr_<name>.
stats::Frame to_frame(const std::vector<AuthorAnalysisRow>& rows);

/// Stable column order; covariate and attribute columns follow in name order.
void write_rows_csv(std::ostream& out, const std::vector<AuthorAnalysisRow>& rows);

}  // namespace scout
