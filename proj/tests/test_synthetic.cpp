#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "scout/pipeline.hpp"
#include "scout/synthetic.hpp"

using namespace scout;

namespace {

std::string corpus_text(const Corpus& c) {
  std::ostringstream out;
  write_corpus(out, c);
  return out.str();
}

}  // namespace

TEST_SUITE("synthetic") {
  TEST_CASE("same seed gives identical corpora") {
    auto cfg = synth_preset("small");
    cfg.authors = 120;
    auto a = generate_corpus(cfg, 1), b = generate_corpus(cfg, 1), c = generate_corpus(cfg, 2);
    CHECK(corpus_text(a.corpus) == corpus_text(b.corpus));
    CHECK(a.manifest_json() == b.manifest_json());
    CHECK(corpus_text(a.corpus) != corpus_text(c.corpus));
  }

  TEST_CASE("generated corpus passes validation on reload") {
    auto cfg = synth_preset("small");
    cfg.authors = 150;
    auto s = generate_corpus(cfg, 3);
    std::istringstream in(corpus_text(s.corpus));
    auto again = parse_corpus(in, EligibilityFilter{});
    CHECK(again.size() == s.corpus.size());
    CHECK(again.report().warnings.count("incomplete_record") == 0);
    CHECK(corpus_text(again) == corpus_text(s.corpus));
    for (const auto& career : again.careers()) CHECK(career.papers.size() >= 10);
    // Every generated author meets the default minimum; filler authors do not.
    std::size_t found = 0;
    for (const auto& a : s.authors) found += again.career(a.id) != nullptr;
    CHECK(found == s.authors.size());
    CHECK(again.careers().size() == s.authors.size());
  }

  TEST_CASE("full exploration gives EP of one") {
    auto cfg = synth_preset("small");
    cfg.authors = 60;
    cfg.explore_min = cfg.explore_max = 1.0;
    cfg.explore_decay = 0.0;
    auto s = generate_corpus(cfg, 4);
    AnalysisSettings st;
    st.window = cfg.window;
    Workspace ws(s.corpus, st);
    for (const auto& a : s.authors) {
      const auto* career = s.corpus.career(a.id);
      REQUIRE(career);
      CHECK(*ep(s.corpus, ws.index(), *career, cfg.window) == 1.0);
    }
  }

  TEST_CASE("manifest records the planted values") {
    auto cfg = synth_preset("default");
    cfg.authors = 50;
    auto s = generate_corpus(cfg, 9);
    auto j = nlohmann::json::parse(s.manifest_json());
    CHECK(j.dump().find("0.3") != std::string::npos);
    CHECK(j.dump().find("-0.25") != std::string::npos);
  }

  TEST_CASE("invalid settings are rejected") {
    auto cfg = synth_preset("default");
    cfg.areas = 0;
    CHECK_THROWS(cfg.validate());
    CHECK_THROWS(synth_preset("nope"));
  }
}
