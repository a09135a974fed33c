#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scout/corpus.hpp"

namespace scout {

using KeyId = std::uint32_t;

/// Area and topic keys of every paper under one code scheme, as dense ids.
/// Key dictionaries are sorted, so ids are stable for a given corpus and scheme.
class CodeIndex {
 public:
  CodeIndex() = default;
  CodeIndex(const Corpus& corpus, const CodeScheme& scheme);

  [[nodiscard]] const CodeScheme& scheme() const { return scheme_; }
  [[nodiscard]] std::span<const std::string> areas() const { return areas_; }
  [[nodiscard]] std::span<const std::string> topics() const { return topics_; }
  [[nodiscard]] std::optional<KeyId> area_id(std::string_view key) const;
  [[nodiscard]] std::optional<KeyId> topic_id(std::string_view key) const;

  /// Distinct areas / topics of a paper, ascending id.
  [[nodiscard]] std::span<const KeyId> paper_areas(PaperIndex p) const { return paper_areas_[p]; }
  [[nodiscard]] std::span<const KeyId> paper_topics(PaperIndex p) const { return paper_topics_[p]; }
  /// Number of codes of the paper falling in each of its areas (parallel to paper_areas).
  [[nodiscard]] std::span<const std::uint32_t> paper_area_multiplicity(PaperIndex p) const {
    return area_multiplicity_[p];
  }
  /// Area of the first listed code, if the paper has codes.
  [[nodiscard]] std::optional<KeyId> first_area(PaperIndex p) const;
  /// Codes shorter than a configured prefix length.
  [[nodiscard]] std::size_t short_codes() const { return short_codes_; }

 private:
  CodeScheme scheme_;
  std::vector<std::string> areas_;
  std::vector<std::string> topics_;
  std::vector<std::vector<KeyId>> paper_areas_;
  std::vector<std::vector<std::uint32_t>> area_multiplicity_;
  std::vector<std::vector<KeyId>> paper_topics_;
  std::vector<std::optional<KeyId>> first_area_;
  std::size_t short_codes_ = 0;
};

}  // namespace scout
