#include <sstream>

#include "doctest.h"
#include "scout/codes.hpp"
#include "scout/corpus.hpp"
#include "support.hpp"

using namespace scout;
using scout::testing::corpus_of;
using scout::testing::day;
using scout::testing::rec;

namespace {

Corpus parse_text(const std::string& text, EligibilityFilter f = scout::testing::open_filter()) {
  std::istringstream in(text);
  return parse_corpus(in, f);
}

std::string line(const std::string& id, const std::string& date, const std::string& authors,
                 const std::string& extra = "") {
  return R"({"paper_id":")" + id + R"(","date":")" + date + R"(","authors":[)" + authors +
         R"(],"codes":["11.20"])" + extra + "}\n";
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("dates") {
    CHECK(Date::parse("2001-06-15") == day(2001, 6, 15));
    CHECK_FALSE(Date::parse("2001-02-30").has_value());
    CHECK_FALSE(Date::parse("2001-6-15").has_value());
    CHECK_FALSE(Date::parse("20010615").has_value());
    CHECK(day(2001, 6, 15).to_string() == "2001-06-15");
    CHECK(elapsed_years(day(2000), day(2010)) == 10);
    CHECK(elapsed_years(day(2000), day(2009, 12, 31)) == 9);
  }

  TEST_CASE("code keys") {
    CodeScheme s;
    CHECK(area_key("91.25.fd", s) == "91");
    CHECK(topic_key("74", s) == "74");
    s.topic_prefix_len = 4;
    CHECK(topic_key("04.20.-q", s) == "0420");
    CHECK(topic_key("7", s) == "7");
    CHECK(normalize_code("04.20.-q", s) == "0420q");
    CodeScheme bad;
    bad.area_prefix_len = 4;
    bad.topic_prefix_len = 2;
    CHECK_THROWS(bad.validate());
  }

  TEST_CASE("short codes are counted") {
    auto c = corpus_of({rec("p", day(2000), {"x"}, {"7", "1234"})});
    CodeScheme s;
    s.topic_prefix_len = 4;
    CodeIndex idx(c, s);
    CHECK(idx.short_codes() == 1);
    CHECK(idx.topic_id("7").has_value());
  }

  TEST_CASE("missing date is dropped with a warning") {
    const std::string text = line("a", "2000-01-01", R"("x")") + R"({"paper_id":"b","authors":["x"],"codes":[]})" +
                             "\n" + line("c", "2001-01-01", R"("x")");
    auto c = parse_text(text);
    CHECK(c.size() == 2);
    CHECK(c.report().count("incomplete_record") == 1);
  }

  TEST_CASE("drop-author policy removes every paper of the author") {
    std::vector<PaperRecord> r{rec("a", day(2000), {"x"}, {"11"}), rec("b", day(2001), {"x", "y"}, {"11"}),
                               rec("c", day(2002), {"y"}, {"11"})};
    r.push_back(rec("d", day(2003), {"x"}, {}));
    r.back().codes.reset();
    auto f = scout::testing::open_filter();
    f.policy = MissingFieldPolicy::drop_author;
    auto c = corpus_of(r, f);
    CHECK(c.size() == 1);
    CHECK(c.find("c").has_value());
    CHECK(c.report().count("dropped_by_author_policy") == 2);
  }

  TEST_CASE("minimum paper count") {
    std::vector<PaperRecord> r;
    for (int i = 0; i < 9; ++i) r.push_back(rec("u" + std::to_string(i), day(2000 + i), {"u"}, {"11"}));
    for (int i = 0; i < 10; ++i) r.push_back(rec("v" + std::to_string(i), day(2000 + i), {"v"}, {"11"}));
    EligibilityFilter f;
    f.min_papers = 10;
    auto c = corpus_of(r, f);
    CHECK(c.career("u") == nullptr);
    REQUIRE(c.career("v") != nullptr);
    CHECK(c.career("v")->papers.size() == 10);
    CHECK(c.careers().size() == 1);
  }

  TEST_CASE("empty input") {
    auto c = parse_text("");
    CHECK(c.size() == 0);
    CHECK(c.careers().empty());
  }

  TEST_CASE("malformed input names the line") {
    CHECK_THROWS_WITH_AS(parse_text(line("a", "2000-01-01", R"("x")") + "{not json\n"), doctest::Contains("line 2"),
                         CorpusError);
    CHECK_THROWS_AS(parse_text(line("a", "2000-01-01", R"("x")") + line("a", "2001-01-01", R"("y")")), CorpusError);
    CHECK_THROWS_AS(parse_text(line("a", "2000-01-01", R"("x","x")")), CorpusError);
    CHECK_THROWS_AS(parse_text(line("a", "2000-01-01", R"("x","y")", R"(,"institutions":[["I1"]])")), CorpusError);
    CHECK_THROWS_AS(parse_text(line("a", "2000-13-01", R"("x")")), CorpusError);
    CHECK_THROWS_AS(parse_text(R"({"date":"2000-01-01","authors":["x"]})"), CorpusError);
  }

  TEST_CASE("citation counts") {
    auto c = corpus_of({rec("P", day(2001, 6, 15), {"x"}, {"11"}), rec("Q", day(2003), {"y"}, {"11"}, {"P"}),
                        rec("R", day(2007), {"z"}, {"11"}, {"P", "OUTSIDE"}), rec("S", day(2008), {"z"}, {"11"})});
    CHECK(c.citation_count("P", 5) == 1);
    CHECK(c.citation_count("P", 10) == 2);
    CHECK(c.citation_count("S", 5) == 0);
    CHECK(c.report().count("external_ref") == 1);
    CHECK(c.paper(c.index_of("R")).reference_count() == 2);
    CHECK_THROWS_AS((void)c.citation_count("nope", 5), CorpusError);
  }

  TEST_CASE("citation counts are monotone in the horizon") {
    Rng rng(2);
    auto c = corpus_of(scout::testing::random_records(rng, 200, 5, 2));
    for (PaperIndex p = 0; p < c.size(); ++p) {
      CHECK(c.citation_count(p, 5) <= c.citation_count(p, 10));
      CHECK(c.citation_count(p, 10) <= c.citers(p).size());
    }
  }

  TEST_CASE("careers are chronological with id tie-break") {
    auto c = corpus_of({rec("b", day(2000), {"x"}, {"11"}), rec("a", day(2000), {"x"}, {"11"}),
                        rec("c", day(1999), {"x"}, {"11"})});
    const auto* career = c.career("x");
    REQUIRE(career);
    std::vector<std::string> ids;
    for (PaperIndex p : career->papers) ids.push_back(c.paper(p).id);
    CHECK(ids == std::vector<std::string>{"c", "a", "b"});
    CHECK(career->first_date == day(1999));
  }

  TEST_CASE("reload and refilter change nothing") {
    Rng rng(44);
    EligibilityFilter f;
    f.min_papers = 20;
    auto c = corpus_of(scout::testing::random_records(rng, 300, 6, 3, 12), f);
    std::ostringstream out;
    write_corpus(out, c);
    auto again = parse_text(out.str(), f);
    std::ostringstream out2;
    write_corpus(out2, again);
    CHECK(out.str() == out2.str());
    CHECK(again.careers().size() == c.careers().size());
    for (std::size_t k = 0; k < c.careers().size(); ++k) {
      CHECK(c.careers()[k].id == again.careers()[k].id);
      CHECK(c.careers()[k].papers == again.careers()[k].papers);
    }
  }

  TEST_CASE("date range filter") {
    auto f = scout::testing::open_filter();
    f.from = day(2000);
    f.to = day(2000, 12, 31);
    auto c = corpus_of({rec("a", day(1999), {"x"}, {"11"}), rec("b", day(2000, 5), {"x"}, {"11"}),
                        rec("c", day(2001), {"x"}, {"11"})},
                       f);
    CHECK(c.size() == 1);
    CHECK(c.report().count("out_of_date_range") == 2);
  }

  TEST_CASE("byline replacement re-derives careers") {
    auto c = corpus_of({rec("a", day(2000), {"x"}, {"11"}), rec("b", day(2001), {"y"}, {"11"})});
    const AuthorId x = *c.find_author("x"), y = *c.find_author("y");
    auto swapped = c.with_bylines({{y}, {x}});
    CHECK(swapped.paper(swapped.index_of("a")).authors == std::vector<AuthorId>{y});
    CHECK(swapped.career("x")->papers == std::vector<PaperIndex>{swapped.index_of("b")});
    CHECK_THROWS((void)c.with_bylines({{x, y}, {x}}));
  }
}
