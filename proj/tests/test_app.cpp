#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "scout/app/commands.hpp"
#include "scout/app/config.hpp"
#include "scout/app/manifest.hpp"

using namespace scout;
using namespace scout::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("scout_app_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + SCOUT_EXE + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kSmall = R"(
[synth]
preset = "small"
authors = 150

[split]
value = 4

[regress]
models = ["S3", "S4"]

[analyses]
psw = true

[run]
seed = 11
out = "out"
)";

}  // namespace

TEST_SUITE("app") {
  TEST_CASE("defaults parse from an empty document") {
    auto c = parse_config("");
    auto d = default_config();
    CHECK(canonical_json(c) == canonical_json(d));
    CHECK(c.corpus_path() == fs::path("out") / "corpus.jsonl");
    CHECK(c.analysis.split.value == d.analysis.split.value);
  }

  TEST_CASE("unknown keys and sections are rejected") {
    CHECK_THROWS_WITH_AS(parse_config("[window]\nwidth = 3\n"), doctest::Contains("window.width"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[nonsense]\n"), doctest::Contains("nonsense"), ConfigError);
    CHECK_THROWS_AS(parse_config("[window]\nmode = \"decades\"\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[synth]\npreset = \"nope\"\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[split]\nmode = \"both\"\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/run.toml"), ConfigError);
  }

  TEST_CASE("relative paths resolve against the config directory") {
    auto c = parse_config("[corpus]\npath = \"data/c.jsonl\"\n[run]\nout = \"o\"\n", "/tmp/cfg");
    CHECK(c.corpus_path() == fs::path("/tmp/cfg/data/c.jsonl"));
    CHECK(c.out == fs::path("/tmp/cfg/o"));
  }

  TEST_CASE("canonical json ignores the output directory and tracks settings") {
    auto a = parse_config("[run]\nout = \"x\"\n");
    auto b = parse_config("[run]\nout = \"y\"\n");
    CHECK(canonical_json(a) == canonical_json(b));
    auto c = parse_config("[window]\nmode = \"papers\"\nj = 3\n");
    CHECK(canonical_json(a) != canonical_json(c));
    CHECK(nlohmann::json::parse(canonical_json(c)).is_object());
  }

  TEST_CASE("sha256") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  }

  TEST_CASE("manifest is reproducible") {
    auto build = [] {
      Manifest m("metrics", "{\"a\":1}", 5);
      auto& s = m.stage("metrics");
      s.inputs.emplace_back("corpus", sha256_hex("c"));
      s.outputs.emplace_back("analysis.csv", sha256_hex("x"));
      m.warn("something");
      return m;
    };
    auto a = build(), b = build();
    CHECK(a.to_json() == b.to_json());
    CHECK(a.config_hash() == sha256_hex("{\"a\":1}"));
    auto j = nlohmann::json::parse(a.to_json());
    CHECK(j.dump().find("time") == std::string::npos);
    CHECK(a.stages().size() == 1);
    CHECK(a.warnings().size() == 1);
    CHECK_FALSE(artifact_versions().empty());
  }

  TEST_CASE("exit codes") {
    CHECK(exit_code_for(ConfigError("x")) == kValidationFailure);
    CHECK(exit_code_for(CorpusError("x")) == kValidationFailure);
    CHECK(exit_code_for(MissingArtifactError("x")) == kValidationFailure);
    CHECK(exit_code_for(std::runtime_error("x")) == kAnalysisError);
    CHECK(parse_sweep_dimension("digits") == SweepDimension::digits);
    CHECK(std::string(to_string(SweepDimension::window)) == "window");
    CHECK_THROWS_AS(parse_sweep_dimension("colour"), ConfigError);
  }

  TEST_CASE("command line failures exit with 1") {
    auto dir = scratch("fail");
    CHECK(run("--no-such-flag") == 1);
    CHECK(run("validate " + (dir / "missing.jsonl").string()) == 1);
    CHECK(run("--out " + dir.string() + " metrics") == 1);
    std::ofstream(dir / "bad.toml") << "[bogus]\n";
    CHECK(run("--config " + (dir / "bad.toml").string() + " validate") == 1);
    std::ofstream(dir / "bad.jsonl") << "{broken\n";
    CHECK(run("validate " + (dir / "bad.jsonl").string()) == 1);
    CHECK(run("--out " + dir.string() + " sweep colour") == 1);
  }

  TEST_CASE("small end-to-end run") {
    auto dir = scratch("e2e");
    std::ofstream(dir / "run.toml") << kSmall;
    const std::string base = "--config " + (dir / "run.toml").string() + " ";
    REQUIRE(run(base + "synth") == 0);
    CHECK(fs::exists(dir / "out" / "corpus.jsonl"));
    CHECK(run(base + "validate") == 0);
    CHECK(run(base + "metrics") == 0);
    CHECK(run(base + "regress") == 0);
    CHECK(run(base + "psw") == 0);
    for (const char* f : {"analysis.csv", "regression_S3.csv", "regression_S4.csv", "psw_ate.csv", "manifest_metrics.json",
                          "manifest_regress.json"}) {
      CHECK_MESSAGE(fs::exists(dir / "out" / f), f);
    }
    auto m = nlohmann::json::parse(slurp(dir / "out" / "manifest_metrics.json"));
    CHECK(m.dump().find(sha256_file(dir / "out" / "analysis.csv")) != std::string::npos);

    // Same inputs, same bytes.
    const auto first = slurp(dir / "out" / "analysis.csv");
    CHECK(run(base + "metrics") == 0);
    CHECK(slurp(dir / "out" / "analysis.csv") == first);

    // In-process session agrees with the binary.
    auto cfg = load_config(dir / "run.toml");
    cfg.out = dir / "session";
    fs::create_directories(cfg.out);
    fs::copy_file(dir / "out" / "corpus.jsonl", cfg.out / "corpus.jsonl");
    fs::copy_file(dir / "out" / "attributes.jsonl", cfg.out / "attributes.jsonl");
    std::ostringstream log;
    Session s(cfg, "metrics", log);
    s.metrics();
    s.finish();
    CHECK(slurp(cfg.out / "analysis.csv") == first);
  }
}
