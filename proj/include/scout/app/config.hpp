#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "scout/causal/psm.hpp"
#include "scout/causal/psw.hpp"
#include "scout/pipeline.hpp"
#include "scout/stats/mediation.hpp"
#include "scout/stats/models.hpp"
#include "scout/synthetic.hpp"
#include "scout/temporal.hpp"

namespace scout::app {

/// Invalid or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PsmSettings {
  causal::TreatOn treat_on = causal::TreatOn::ep;
  std::string treated_group = "A";
  std::string control_group = "D";
  double caliper_sd = 0.2;
};

struct PswSettings {
  causal::PropensityMethod method = causal::PropensityMethod::logistic;
  std::string baseline = "D";
  std::string treated = "A";
  double trim_percentile = 99.0;
  int trees = 200;
  double shrinkage = 0.05;
};

struct NullSettings {
  int replicates = 200;
  int swaps_per_edge = 10;
  bool author = true;
  bool paper = true;
};

struct SweepSettings {
  std::vector<int> splits;     // career years
  std::vector<int> window_j;
  std::vector<int> window_k;
  std::vector<double> quantiles;
  std::vector<std::pair<int, int>> digits;  // (area, topic) prefix lengths
  stats::ModelSpec model = stats::ModelSpec::S4;
  std::vector<std::string> dimensions;  // swept by `scout run`; subset of split, window, quantile, digits
};

struct RunConfig {
  // Unset paths fall back to the products of `scout synth` in the output directory.
  std::optional<std::filesystem::path> corpus;
  std::optional<std::filesystem::path> attributes;
  EligibilityFilter filter;
  AnalysisSettings analysis;

  std::vector<stats::ModelSpec> regressions = {stats::ModelSpec::S3, stats::ModelSpec::S4, stats::ModelSpec::S5,
                                               stats::ModelSpec::S6};
  stats::ModelExtras extras;
  int bootstrap = 0;  // bootstrap replicates for regression coefficients; 0 disables

  bool run_psm = false;
  bool run_psw = false;
  bool run_null = false;
  bool run_mediation = false;
  bool run_cohorts = false;
  bool run_transitions = false;
  bool run_stability = false;
  bool run_drastic = false;
  bool run_trajectories = false;

  PsmSettings psm;
  PswSettings psw;
  NullSettings null_models;
  stats::MediationSpec mediation;
  std::vector<Cohort> cohorts;
  int cohort_horizon = 10;
  std::vector<Date> snapshots;
  int trajectory_years = 15;
  std::vector<std::pair<Date, Date>> periods;
  int drastic_split = 10;
  SweepSettings sweep;

  std::string synth_preset = "default";
  SynthConfig synth;

  std::uint64_t seed = 1;
  std::filesystem::path out = "out";

  /// Checks ranges and that every selected analysis has what it needs.
  void validate() const;

  [[nodiscard]] std::filesystem::path corpus_path() const { return corpus ? *corpus : out / "corpus.jsonl"; }
  [[nodiscard]] std::filesystem::path attributes_path() const {
    return attributes ? *attributes : out / "attributes.jsonl";
  }
};

RunConfig default_config();
/// Parses TOML; relative paths resolve against the file's directory.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& toml_text, const std::filesystem::path& base_dir = ".");

/// Canonical JSON of every setting that affects results (the output
/// directory and thread count are left out).
std::string canonical_json(const RunConfig& config);

}  // namespace scout::app
