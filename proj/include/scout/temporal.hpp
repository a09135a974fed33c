#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "scout/analysis.hpp"
#include "scout/metrics.hpp"

namespace scout {

struct MeanCi {
  std::size_t n = 0;
  double mean = 0.0;
  double low = 0.0;   // mean - 1.96 SE
  double high = 0.0;  // mean + 1.96 SE
};

/// mean ± 1.96 · sample_sd / sqrt(n); NaN bounds for n < 2.
MeanCi mean_ci(std::span<const double> values);

struct TrajectoryPoint {
  int year = 0;  // career year, 1-based
  MeanCi ep;
  MeanCi ed;
};

struct Trajectories {
  std::size_t authors = 0;
  std::vector<TrajectoryPoint> points;
};

/// Cumulative EP/ED at the end of each career year 1..max_year for careers
/// spanning at least `max_year` career years (last paper in year max_year or
/// later). Throws StatsError when no career qualifies.
Trajectories temporal_trajectories(const MetricsContext& ctx, int max_year = 15);

struct Cohort {
  int first_year_from = 0;  // inclusive
  int first_year_to = 0;    // inclusive
  [[nodiscard]] std::string label() const;
};

struct CohortSample {
  Cohort cohort;
  std::vector<double> ep;
  std::vector<double> ed;
};

struct CohortTest {
  std::size_t a = 0, b = 0;  // cohort positions
  std::string metric;        // "ep" or "ed"
  double d = 0.0;
  double p = 1.0;
};

struct CohortComparison {
  std::vector<CohortSample> samples;
  std::vector<CohortTest> tests;
};

/// EP/ED over each author's first `horizon` career years, grouped by the
/// calendar year of the first paper, with pairwise two-sample K-S tests.
CohortComparison cohort_compare(const MetricsContext& ctx, const std::vector<Cohort>& cohorts, int horizon);

inline constexpr std::size_t kGroupStates = 5;  // A, B, C, D, excluded
using TransitionMatrix = std::array<std::array<std::size_t, kGroupStates>, kGroupStates>;

struct GroupTransitions {
  std::vector<Date> snapshots;
  std::vector<std::vector<Group>> membership;  // [snapshot][career]
  std::vector<TransitionMatrix> transitions;   // consecutive snapshot pairs, rows = earlier state
  std::vector<std::array<double, 4>> stay_rate;  // per transition, groups A..D; NaN for empty rows
  std::size_t persistent = 0;  // grouped at the first snapshot and in that same group at every snapshot
  std::size_t grouped_first = 0;
  [[nodiscard]] double persistence_rate() const;
};

/// Groups at each snapshot from papers dated strictly before it. Careers with
/// fewer than two such papers, or undefined EP/ED, are excluded at that snapshot.
GroupTransitions group_transitions(const MetricsContext& ctx, std::vector<Date> snapshots, double quantile_pct);

}  // namespace scout
