#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "scout/date.hpp"

namespace scout {

using PaperIndex = std::uint32_t;
using AuthorId = std::uint32_t;

/// Raised for malformed input lines and violated corpus invariants.
class CorpusError : public std::runtime_error {
 public:
  CorpusError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// How classification codes map to coarse areas and fine topics.
struct CodeScheme {
  int area_prefix_len = 2;
  std::optional<int> topic_prefix_len;  // nullopt keeps the whole normalized code
  std::string separators = ".-+ ";

  void validate() const;
};

/// Strips separator characters from a code.
std::string normalize_code(std::string_view code, const CodeScheme& scheme);
/// Area key: normalized prefix of `area_prefix_len` characters (whole code if shorter).
std::string area_key(std::string_view code, const CodeScheme& scheme);
/// Topic key: normalized prefix of `topic_prefix_len` characters, or the whole code.
std::string topic_key(std::string_view code, const CodeScheme& scheme);

enum class MissingFieldPolicy { drop_paper, drop_author };

struct EligibilityFilter {
  int min_papers = 10;
  std::optional<Date> from;  // inclusive
  std::optional<Date> to;    // inclusive
  MissingFieldPolicy policy = MissingFieldPolicy::drop_paper;
};

/// Warning tallies gathered while loading; keys are stable warning classes.
struct ValidationReport {
  std::size_t lines = 0;
  std::size_t papers = 0;
  std::size_t authors_total = 0;
  std::size_t authors_eligible = 0;
  std::map<std::string, std::size_t> warnings;

  void warn(const std::string& kind, std::size_t n = 1) { warnings[kind] += n; }
  [[nodiscard]] std::size_t count(const std::string& kind) const;
  [[nodiscard]] std::string to_json() const;
};

struct Paper {
  std::string id;
  Date date;
  std::vector<AuthorId> authors;  // byline order
  std::vector<std::string> codes;
  std::vector<PaperIndex> refs;  // in-corpus references, distinct
  std::vector<std::string> external_refs;
  std::optional<std::vector<std::vector<std::string>>> institutions;  // parallel to authors
  std::vector<std::pair<std::string, double>> covariates;             // externally supplied

  [[nodiscard]] std::size_t reference_count() const { return refs.size() + external_refs.size(); }
};

struct AuthorCareer {
  AuthorId author = 0;
  std::string id;
  std::vector<PaperIndex> papers;  // ascending (date, paper_id)
  Date first_date;
};

/// Unvalidated paper as read from input, before filtering and reference resolution.
struct PaperRecord {
  std::string id;
  std::optional<Date> date;
  std::vector<std::string> authors;
  std::optional<std::vector<std::string>> codes;
  std::vector<std::string> refs;
  std::optional<std::vector<std::vector<std::string>>> institutions;
  std::vector<std::pair<std::string, double>> covariates;
};

/// Papers with author ids and references resolved against the input vector.
struct CorpusParts {
  std::vector<std::string> author_names;
  std::vector<Paper> papers;  // refs index into this vector
  std::map<std::string, std::map<std::string, std::string>> attributes;
  std::vector<bool> excluded_authors;  // parallel to author_names; may be empty
  ValidationReport report;
};

/// Immutable publication store with derived careers and citation index.
class Corpus {
 public:
  Corpus() = default;

  /// Sorts papers chronologically, remaps references, and derives careers.
  static Corpus assemble(CorpusParts parts, const EligibilityFilter& filter);

  [[nodiscard]] std::span<const Paper> papers() const { return papers_; }
  [[nodiscard]] const Paper& paper(PaperIndex i) const { return papers_[i]; }
  [[nodiscard]] std::size_t size() const { return papers_.size(); }
  [[nodiscard]] std::optional<PaperIndex> find(std::string_view paper_id) const;
  [[nodiscard]] PaperIndex index_of(std::string_view paper_id) const;  // throws on unknown id

  [[nodiscard]] std::span<const std::string> author_names() const { return author_names_; }
  [[nodiscard]] const std::string& author_name(AuthorId a) const { return author_names_[a]; }
  [[nodiscard]] std::optional<AuthorId> find_author(std::string_view id) const;
  /// Every paper of any author (eligible or not), chronological.
  [[nodiscard]] std::span<const PaperIndex> author_papers(AuthorId a) const { return author_papers_[a]; }

  /// Careers of eligible authors, ordered by author id string.
  [[nodiscard]] std::span<const AuthorCareer> careers() const { return careers_; }
  [[nodiscard]] const AuthorCareer* career(std::string_view author_id) const;
  [[nodiscard]] const std::map<std::string, std::string>* attributes(std::string_view author_id) const;
  [[nodiscard]] const std::map<std::string, std::map<std::string, std::string>>& all_attributes() const {
    return attributes_;
  }

  /// Papers citing `p`, chronological.
  [[nodiscard]] std::span<const PaperIndex> citers(PaperIndex p) const { return citers_[p]; }
  [[nodiscard]] std::size_t citation_count(PaperIndex p, int horizon_years) const;
  [[nodiscard]] std::size_t citation_count(std::string_view paper_id, int horizon_years) const;

  [[nodiscard]] const ValidationReport& report() const { return report_; }
  [[nodiscard]] const EligibilityFilter& filter() const { return filter_; }

  /// Same papers with every byline replaced; careers are re-derived.
  [[nodiscard]] Corpus with_bylines(std::vector<std::vector<AuthorId>> bylines) const;

  friend Corpus with_attributes(Corpus corpus,
                                std::map<std::string, std::map<std::string, std::string>> attrs);

 private:
  void derive();

  std::vector<Paper> papers_;
  std::unordered_map<std::string, PaperIndex> by_id_;
  std::vector<std::string> author_names_;
  std::unordered_map<std::string, AuthorId> author_by_name_;
  std::vector<std::vector<PaperIndex>> author_papers_;
  std::vector<bool> excluded_authors_;
  std::vector<AuthorCareer> careers_;
  std::unordered_map<std::string, std::size_t> career_by_id_;
  std::map<std::string, std::map<std::string, std::string>> attributes_;
  std::vector<std::vector<PaperIndex>> citers_;
  ValidationReport report_;
  EligibilityFilter filter_;
};

/// Parses one JSONL paper line; throws CorpusError naming `line_no` on malformed input.
PaperRecord parse_paper_line(std::string_view line, std::size_t line_no);

/// Validates, filters, and assembles a corpus from raw records.
Corpus build_corpus(std::vector<PaperRecord> records, const EligibilityFilter& filter,
                    ValidationReport report = {});

Corpus parse_corpus(std::istream& in, const EligibilityFilter& filter);
Corpus load_corpus(const std::filesystem::path& path, const EligibilityFilter& filter);

/// Author attribute sidecar: JSONL of {"author_id": ..., "attributes": {...}}.
std::map<std::string, std::map<std::string, std::string>> load_author_attributes(
    const std::filesystem::path& path);

/// Corpus with attributes attached (papers and careers unchanged).
Corpus with_attributes(Corpus corpus, std::map<std::string, std::map<std::string, std::string>> attrs);

void write_corpus(std::ostream& out, const Corpus& corpus);
std::string paper_to_json(const Corpus& corpus, const Paper& paper);

}  // namespace scout
