#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scout/codes.hpp"
#include "scout/corpus.hpp"

namespace scout {

enum class ImpactKind {
  log_c5,
  log_c10,
  normalized_v1,
  normalized_v2,
  percentile_max,
  percentile_mean,
  max_log_c5,
  max_log_c10
};

enum class Aggregate { mean, max };

const char* to_string(ImpactKind k);
ImpactKind parse_impact_kind(std::string_view s);
/// max_log_* kinds aggregate by maximum, the rest by mean.
Aggregate default_aggregate(ImpactKind k);

/// Per-paper impact values for one measure. Undefined values are NaN and are
/// tallied in `excluded()`.
class ImpactTable {
 public:
  ImpactTable(const Corpus& corpus, const CodeIndex& index, ImpactKind kind);

  [[nodiscard]] ImpactKind kind() const { return kind_; }
  [[nodiscard]] double value(PaperIndex p) const { return values_[p]; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] double log_c5(PaperIndex p) const { return log_c5_[p]; }
  [[nodiscard]] std::size_t excluded() const { return excluded_; }

 private:
  ImpactKind kind_;
  std::vector<double> values_;
  std::vector<double> log_c5_;
  std::size_t excluded_ = 0;
};

/// Normalized citations c_raw / e, where e is the arithmetic mean over the
/// paper's areas of each area stratum's mean log-c5. NaN when e is 0.
double normalize_v1(double c_raw, std::span<const std::vector<double>> area_strata);
/// As normalize_v1 with per-member area fractions f (pairs of log-c5, f) and
/// the harmonic mean of the stratum means. NaN when any stratum mean is 0.
double normalize_v2(double c_raw, std::span<const std::vector<std::pair<double, double>>> area_strata);
/// 100 * (stratum members strictly below `value`) / stratum size.
double percentile_rank(double value, std::span<const double> stratum);

/// Aggregate of defined values over `papers`; NaN when none are defined.
double aggregate_impact(const ImpactTable& table, std::span<const PaperIndex> papers, Aggregate how);

}  // namespace scout
