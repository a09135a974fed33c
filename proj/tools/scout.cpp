#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "scout/app/commands.hpp"
#include "scout/parallel.hpp"

int main(int argc, char** argv) {
  using namespace scout::app;

  CLI::App app{"scout: exploration metrics and impact analyses over publication corpora"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::optional<std::string> out;
  app.add_option("--config", config_path, "TOML run configuration");
  app.add_option("--seed", seed, "master seed (overrides run.seed)");
  app.add_option("--threads", threads, "worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out, "output directory (overrides run.out)");

  std::optional<std::string> corpus_arg;
  auto* validate = app.add_subcommand("validate", "parse a corpus and report warnings");
  validate->add_option("corpus", corpus_arg, "corpus JSONL (default: from config)");
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus with planted effects");
  auto* graph = app.add_subcommand("graph", "build the topic graph and export edges and strengths");
  auto* metrics = app.add_subcommand("metrics", "compute the per-author analysis table");
  auto* regress = app.add_subcommand("regress", "fit the configured regression models");
  auto* psm = app.add_subcommand("psm", "propensity-score matching");
  auto* psw = app.add_subcommand("psw", "propensity-score weighting (ATE and ATT)");
  std::optional<int> replicates;
  auto* null = app.add_subcommand("null", "author- and paper-level shuffle null models");
  null->add_option("--replicates", replicates, "replicates per null model")->check(CLI::PositiveNumber);
  std::string dimension;
  auto* sweep = app.add_subcommand("sweep", "robustness sweep over one dimension");
  sweep->add_option("dimension", dimension, "split, window, quantile or digits")->required();
  auto* report = app.add_subcommand("report", "emit plot-data series for the selected analyses");
  auto* run = app.add_subcommand("run", "full pipeline");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidationFailure;
  }

  try {
    RunConfig config = config_path.empty() ? default_config() : load_config(config_path);
    if (seed) config.seed = *seed;
    if (out) config.out = *out;
    if (replicates) config.null_models.replicates = *replicates;
    config.validate();
    scout::set_threads(threads);

    CLI::App* cmd = app.get_subcommands().front();
    Session session(config, cmd->get_name(), std::cerr);
    if (cmd == validate) {
      session.validate(corpus_arg ? std::optional<std::filesystem::path>(*corpus_arg) : std::nullopt);
    } else if (cmd == synth) {
      session.synth();
    } else if (cmd == graph) {
      session.graph();
    } else if (cmd == metrics) {
      session.metrics();
    } else if (cmd == regress) {
      session.regress();
    } else if (cmd == psm) {
      session.psm();
    } else if (cmd == psw) {
      session.psw();
    } else if (cmd == null) {
      session.null_models();
    } else if (cmd == sweep) {
      session.sweep(parse_sweep_dimension(dimension));
    } else if (cmd == report) {
      session.report();
    } else if (cmd == run) {
      session.run_all();
    }
    const auto manifest = session.finish();
    for (const auto& w : session.manifest().warnings()) std::cerr << "warning: " << w << "\n";
    std::cerr << "manifest: " << manifest.string() << "\n";
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}
