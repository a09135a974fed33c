#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "scout/corpus.hpp"
#include "scout/rng.hpp"

namespace scout::testing {

inline Date day(int y, unsigned m = 1, unsigned d = 1) { return Date::from_ymd(y, m, d); }

inline PaperRecord rec(std::string id, Date date, std::vector<std::string> authors, std::vector<std::string> codes,
                       std::vector<std::string> refs = {}) {
  PaperRecord r;
  r.id = std::move(id);
  r.date = date;
  r.authors = std::move(authors);
  r.codes = std::move(codes);
  r.refs = std::move(refs);
  return r;
}

inline EligibilityFilter open_filter() {
  EligibilityFilter f;
  f.min_papers = 1;
  return f;
}

inline Corpus corpus_of(std::vector<PaperRecord> records, EligibilityFilter filter = open_filter()) {
  return build_corpus(std::move(records), filter);
}

/// Random corpus of `n` papers with 0..max_codes codes drawn from `topics`
/// topic keys, dated over 1990..1999, each citing up to 3 earlier papers.
inline std::vector<PaperRecord> random_records(Rng& rng, int n, int topics, int max_codes, int authors = 8) {
  std::vector<PaperRecord> out;
  for (int i = 0; i < n; ++i) {
    std::vector<std::string> codes;
    const auto k = rng.integer(0, max_codes);
    for (int c = 0; c < k; ++c) codes.push_back("T" + std::to_string(rng.integer(10, 9 + topics)));
    std::vector<std::string> refs;
    if (i > 0) {
      const auto r = rng.integer(0, 3);
      for (int c = 0; c < r; ++c) {
        const std::string ref = "p" + std::to_string(rng.integer(0, i - 1));
        if (std::find(refs.begin(), refs.end(), ref) == refs.end()) refs.push_back(ref);
      }
    }
    const auto date = day(1990 + i * 10 / n, 1 + static_cast<unsigned>(i % 12), 1);
    out.push_back(rec("p" + std::to_string(i), date, {"a" + std::to_string(rng.integer(0, authors - 1))},
                      std::move(codes), std::move(refs)));
  }
  return out;
}

}  // namespace scout::testing
