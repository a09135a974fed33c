#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scout/stats/design.hpp"

namespace scout::causal {

struct MatchPair {
  std::size_t treated;  // row index in the caller's frame
  std::size_t control;
  double gap;           // |logit propensity difference|
};

struct BalanceRow {
  std::string covariate;
  double smd_before = 0.0;
  double smd_after = 0.0;
};

struct MatchResult {
  std::vector<MatchPair> pairs;
  std::size_t unmatched_treated = 0;
  std::size_t unused_controls = 0;
  double caliper = 0.0;
  std::vector<BalanceRow> balance;
};

/// Greedy 1:1 nearest-neighbour matching without replacement on `score`;
/// treated[i] != 0 marks treated units, which are visited in a seeded random
/// order. Pairs farther apart than `caliper` are not formed. Equal gaps go to
/// the lower control index.
MatchResult match_greedy(std::span<const double> score, std::span<const std::uint8_t> treated, double caliper,
                         std::uint64_t seed);

/// Standardized mean difference (mean_t - mean_c) / sqrt((var_t + var_c) / 2); 0 when the pooled sd is 0.
double smd(std::span<const double> treated, std::span<const double> control);

enum class TreatOn { ep, ed, group_pair };

struct PsmSpec {
  TreatOn treat_on = TreatOn::ep;
  std::string treated_group = "A";  // group_pair only
  std::string control_group = "D";
  std::string outcome = "logcit_future";
  stats::DesignSpec covariates;  // empty numeric/categorical -> default controls
  double caliper_sd = 0.2;
  std::uint64_t seed = 1;
};

struct PsmResult {
  MatchResult match;
  std::size_t n_treated = 0;
  std::size_t n_control = 0;
  double treated_mean = 0.0;  // matched treated outcome mean
  double control_mean = 0.0;
  double att = 0.0;           // mean matched-pair difference
  double p_paired_t = 1.0;
  double p_kruskal = 1.0;
  std::vector<std::string> warnings;
};

/// Treatment column: 1 / 0 / NaN (unassigned) for each frame row.
std::vector<double> psm_treatment(const stats::Frame& frame, const PsmSpec& spec);

/// Logistic propensity on the covariates, greedy matching with caliper
/// caliper_sd · SD(logit propensity), and matched outcome comparison.
PsmResult psm(const stats::Frame& frame, const PsmSpec& spec);

/// Outcome comparison for a given treatment column; `treatment` holds 1, 0 or NaN.
PsmResult psm_with_treatment(const stats::Frame& frame, std::span<const double> treatment,
                             const stats::DesignSpec& covariates, const std::string& outcome, double caliper_sd,
                             std::uint64_t seed);

/// Columns treated_id, control_id, gap; ids are taken from the frame's author_id column.
void write_pairs_csv(std::ostream& out, const PsmResult& result, const stats::Frame& frame);

/// Controls used when a spec leaves covariates empty: logcit_past, p_past, year_first, area_first.
stats::DesignSpec default_covariates();

}  // namespace scout::causal
