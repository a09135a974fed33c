#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "scout/analysis.hpp"
#include "scout/app/config.hpp"
#include "scout/app/manifest.hpp"
#include "scout/pipeline.hpp"

namespace scout::app {

/// An input another command produces is absent.
class MissingArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode { kOk = 0, kValidationFailure = 1, kAnalysisError = 2 };

/// Maps an exception escaping a command to its exit code.
int exit_code_for(const std::exception& e);

enum class SweepDimension { split, window, quantile, digits };
SweepDimension parse_sweep_dimension(const std::string& s);
const char* to_string(SweepDimension d);

/// One command invocation: lazily loaded corpus and workspace, outputs under
/// `config.out`, and the manifest that records them.
class Session {
 public:
  Session(RunConfig config, std::string command, std::ostream& log);
  ~Session();

  [[nodiscard]] const RunConfig& config() const { return config_; }
  Manifest& manifest() { return manifest_; }

  const Corpus& corpus();
  const Workspace& workspace();
  const RowSet& rows();
  const stats::Frame& frame();

  void validate(const std::optional<std::filesystem::path>& corpus_path = std::nullopt);
  void synth();
  void graph();
  void metrics();
  void regress();
  void psm();
  void psw();
  void null_models();
  void sweep(SweepDimension dim);
  void report();
  /// validate, graph, metrics, regress, selected causal analyses, configured
  /// sweeps and report; synthesizes the corpus first when none is configured.
  void run_all();

  /// Writes the manifest; returns its path.
  std::filesystem::path finish();

  /// Writes `content` to `name` under the output directory and records its digest.
  void emit(const std::string& stage, const std::string& name, const std::string& content);

 private:
  void record_corpus_inputs(StageRecord& stage);

  RunConfig config_;
  std::string command_;
  std::ostream& log_;
  Manifest manifest_;
  std::unique_ptr<Corpus> corpus_;
  std::unique_ptr<Workspace> workspace_;
  std::unique_ptr<RowSet> rows_;
  std::unique_ptr<stats::Frame> frame_;
  std::string corpus_digest_;
  std::string attributes_digest_;
};

}  // namespace scout::app
