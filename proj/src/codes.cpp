#include "scout/codes.hpp"

#include <algorithm>

namespace scout {

namespace {

KeyId lookup(const std::vector<std::string>& dict, const std::string& key) {
  return static_cast<KeyId>(std::lower_bound(dict.begin(), dict.end(), key) - dict.begin());
}

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

CodeIndex::CodeIndex(const Corpus& corpus, const CodeScheme& scheme) : scheme_(scheme) {
  scheme_.validate();
  const std::size_t n = corpus.size();
  std::vector<std::vector<std::string>> area_keys(n), topic_keys(n);
  for (std::size_t p = 0; p < n; ++p) {
    for (const auto& code : corpus.paper(static_cast<PaperIndex>(p)).codes) {
      const std::size_t len = normalize_code(code, scheme_).size();
      if (len < static_cast<std::size_t>(scheme_.area_prefix_len) ||
          (scheme_.topic_prefix_len && len < static_cast<std::size_t>(*scheme_.topic_prefix_len))) {
        ++short_codes_;
      }
      area_keys[p].push_back(area_key(code, scheme_));
      topic_keys[p].push_back(topic_key(code, scheme_));
      areas_.push_back(area_keys[p].back());
      topics_.push_back(topic_keys[p].back());
    }
  }
  sort_unique(areas_);
  sort_unique(topics_);

  paper_areas_.resize(n);
  area_multiplicity_.resize(n);
  paper_topics_.resize(n);
  first_area_.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    std::vector<KeyId> a;
    for (const auto& k : area_keys[p]) a.push_back(lookup(areas_, k));
    if (!a.empty()) first_area_[p] = a.front();
    std::sort(a.begin(), a.end());
    for (std::size_t i = 0; i < a.size();) {
      std::size_t j = i;
      while (j < a.size() && a[j] == a[i]) ++j;
      paper_areas_[p].push_back(a[i]);
      area_multiplicity_[p].push_back(static_cast<std::uint32_t>(j - i));
      i = j;
    }
    auto& t = paper_topics_[p];
    for (const auto& k : topic_keys[p]) t.push_back(lookup(topics_, k));
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
  }
}

std::optional<KeyId> CodeIndex::area_id(std::string_view key) const {
  auto it = std::lower_bound(areas_.begin(), areas_.end(), key);
  if (it == areas_.end() || *it != key) return std::nullopt;
  return static_cast<KeyId>(it - areas_.begin());
}

std::optional<KeyId> CodeIndex::topic_id(std::string_view key) const {
  auto it = std::lower_bound(topics_.begin(), topics_.end(), key);
  if (it == topics_.end() || *it != key) return std::nullopt;
  return static_cast<KeyId>(it - topics_.begin());
}

std::optional<KeyId> CodeIndex::first_area(PaperIndex p) const { return first_area_[p]; }

}  // namespace scout
