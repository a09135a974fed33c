#include "scout/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>

#include "json.hpp"

#include "scout/parallel.hpp"

namespace scout {

using nlohmann::json;

void CodeScheme::validate() const {
  if (area_prefix_len <= 0) throw std::invalid_argument("area prefix length must be positive");
  if (topic_prefix_len && *topic_prefix_len <= 0) throw std::invalid_argument("topic prefix length must be positive");
  if (topic_prefix_len && area_prefix_len > *topic_prefix_len) {
    throw std::invalid_argument("area prefix length exceeds topic prefix length");
  }
}

std::string normalize_code(std::string_view code, const CodeScheme& scheme) {
  std::string out;
  out.reserve(code.size());
  for (char c : code) {
    if (scheme.separators.find(c) == std::string::npos) out.push_back(c);
  }
  return out;
}

namespace {

std::string prefix_key(std::string_view code, std::optional<int> len, const CodeScheme& scheme) {
  if (code.empty()) throw std::invalid_argument("empty classification code");
  std::string norm = normalize_code(code, scheme);
  if (norm.empty()) throw std::invalid_argument("classification code has no content: " + std::string(code));
  if (len && static_cast<std::size_t>(*len) < norm.size()) norm.resize(static_cast<std::size_t>(*len));
  return norm;
}

}  // namespace

std::string area_key(std::string_view code, const CodeScheme& scheme) {
  return prefix_key(code, scheme.area_prefix_len, scheme);
}

std::string topic_key(std::string_view code, const CodeScheme& scheme) {
  return prefix_key(code, scheme.topic_prefix_len, scheme);
}

std::size_t ValidationReport::count(const std::string& kind) const {
  auto it = warnings.find(kind);
  return it == warnings.end() ? 0 : it->second;
}

std::string ValidationReport::to_json() const {
  json j;
  j["lines"] = lines;
  j["papers"] = papers;
  j["authors_total"] = authors_total;
  j["authors_eligible"] = authors_eligible;
  j["warnings"] = json::object();
  for (const auto& [k, v] : warnings) j["warnings"][k] = v;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Corpus

Corpus Corpus::assemble(CorpusParts parts, const EligibilityFilter& filter) {
  Corpus c;
  c.filter_ = filter;
  c.report_ = std::move(parts.report);
  c.attributes_ = std::move(parts.attributes);
  c.author_names_ = std::move(parts.author_names);
  c.excluded_authors_ = std::move(parts.excluded_authors);
  c.excluded_authors_.resize(c.author_names_.size(), false);

  auto& in = parts.papers;
  std::vector<PaperIndex> order(in.size());
  std::iota(order.begin(), order.end(), PaperIndex{0});
  std::sort(order.begin(), order.end(), [&](PaperIndex a, PaperIndex b) {
    if (in[a].date != in[b].date) return in[a].date < in[b].date;
    return in[a].id < in[b].id;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (in[order[i]].id == in[order[i - 1]].id) throw CorpusError("duplicate paper_id: " + in[order[i]].id);
  }
  std::vector<PaperIndex> new_pos(in.size());
  for (std::size_t i = 0; i < order.size(); ++i) new_pos[order[i]] = static_cast<PaperIndex>(i);

  c.papers_.reserve(in.size());
  for (PaperIndex old : order) {
    Paper p = std::move(in[old]);
    for (auto& r : p.refs) r = new_pos[r];
    std::sort(p.refs.begin(), p.refs.end());
    p.refs.erase(std::unique(p.refs.begin(), p.refs.end()), p.refs.end());
    c.papers_.push_back(std::move(p));
  }
  c.derive();
  return c;
}

void Corpus::derive() {
  by_id_.clear();
  by_id_.reserve(papers_.size());
  for (std::size_t i = 0; i < papers_.size(); ++i) by_id_.emplace(papers_[i].id, static_cast<PaperIndex>(i));

  author_by_name_.clear();
  for (std::size_t a = 0; a < author_names_.size(); ++a) author_by_name_.emplace(author_names_[a], static_cast<AuthorId>(a));

  author_papers_.assign(author_names_.size(), {});
  citers_.assign(papers_.size(), {});
  for (std::size_t i = 0; i < papers_.size(); ++i) {
    for (AuthorId a : papers_[i].authors) author_papers_[a].push_back(static_cast<PaperIndex>(i));
    for (PaperIndex r : papers_[i].refs) citers_[r].push_back(static_cast<PaperIndex>(i));
  }

  std::vector<AuthorId> by_name(author_names_.size());
  std::iota(by_name.begin(), by_name.end(), AuthorId{0});
  std::sort(by_name.begin(), by_name.end(),
            [&](AuthorId a, AuthorId b) { return author_names_[a] < author_names_[b]; });

  careers_.clear();
  career_by_id_.clear();
  std::size_t with_papers = 0;
  for (AuthorId a : by_name) {
    const auto& ps = author_papers_[a];
    if (ps.empty()) continue;
    ++with_papers;
    if (excluded_authors_[a] || ps.size() < static_cast<std::size_t>(std::max(filter_.min_papers, 1))) continue;
    AuthorCareer career;
    career.author = a;
    career.id = author_names_[a];
    career.papers = ps;
    career.first_date = papers_[ps.front()].date;
    career_by_id_.emplace(career.id, careers_.size());
    careers_.push_back(std::move(career));
  }
  report_.papers = papers_.size();
  report_.authors_total = with_papers;
  report_.authors_eligible = careers_.size();
}

std::optional<PaperIndex> Corpus::find(std::string_view paper_id) const {
  auto it = by_id_.find(std::string(paper_id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

PaperIndex Corpus::index_of(std::string_view paper_id) const {
  auto p = find(paper_id);
  if (!p) throw CorpusError("unknown paper_id: " + std::string(paper_id));
  return *p;
}

std::optional<AuthorId> Corpus::find_author(std::string_view id) const {
  auto it = author_by_name_.find(std::string(id));
  if (it == author_by_name_.end()) return std::nullopt;
  return it->second;
}

const AuthorCareer* Corpus::career(std::string_view author_id) const {
  auto it = career_by_id_.find(std::string(author_id));
  return it == career_by_id_.end() ? nullptr : &careers_[it->second];
}

const std::map<std::string, std::string>* Corpus::attributes(std::string_view author_id) const {
  auto it = attributes_.find(std::string(author_id));
  return it == attributes_.end() ? nullptr : &it->second;
}

std::size_t Corpus::citation_count(PaperIndex p, int horizon_years) const {
  if (horizon_years <= 0) throw std::invalid_argument("citation horizon must be positive");
  const Date d = papers_[p].date;
  const double limit = horizon_years * kDaysPerYear;
  std::size_t n = 0;
  for (PaperIndex q : citers_[p]) {
    const auto gap = days_between(d, papers_[q].date);
    if (gap <= 0) continue;
    if (gap > limit) break;
    ++n;
  }
  return n;
}

std::size_t Corpus::citation_count(std::string_view paper_id, int horizon_years) const {
  return citation_count(index_of(paper_id), horizon_years);
}

Corpus Corpus::with_bylines(std::vector<std::vector<AuthorId>> bylines) const {
  if (bylines.size() != papers_.size()) throw std::invalid_argument("byline count does not match paper count");
  Corpus c = *this;
  for (std::size_t i = 0; i < papers_.size(); ++i) {
    if (bylines[i].size() != papers_[i].authors.size()) {
      throw std::invalid_argument("byline length changed for paper " + papers_[i].id);
    }
    c.papers_[i].authors = std::move(bylines[i]);
  }
  c.derive();
  return c;
}

Corpus with_attributes(Corpus corpus, std::map<std::string, std::map<std::string, std::string>> attrs) {
  corpus.attributes_ = std::move(attrs);
  return corpus;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::vector<std::string> string_array(const json& j, const char* field, std::size_t line_no) {
  if (!j.is_array()) throw CorpusError(std::string("field '") + field + "' must be an array", line_no);
  std::vector<std::string> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_string()) throw CorpusError(std::string("field '") + field + "' must hold strings", line_no);
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

PaperRecord parse_paper_line(std::string_view line, std::size_t line_no) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw CorpusError("malformed JSON record", line_no);
  PaperRecord r;

  auto id = j.find("paper_id");
  if (id == j.end() || !id->is_string() || id->get<std::string>().empty()) {
    throw CorpusError("missing or invalid 'paper_id'", line_no);
  }
  r.id = id->get<std::string>();

  auto authors = j.find("authors");
  if (authors == j.end()) throw CorpusError("missing 'authors'", line_no);
  r.authors = string_array(*authors, "authors", line_no);
  if (r.authors.empty()) throw CorpusError("empty author list", line_no);
  {
    std::set<std::string> seen;
    for (const auto& a : r.authors) {
      if (!seen.insert(a).second) throw CorpusError("duplicate author '" + a + "' in one paper", line_no);
    }
  }

  if (auto d = j.find("date"); d != j.end() && !d->is_null()) {
    if (!d->is_string()) throw CorpusError("'date' must be a string", line_no);
    r.date = Date::parse(d->get<std::string>());
    if (!r.date) throw CorpusError("invalid date '" + d->get<std::string>() + "'", line_no);
  }
  if (auto c = j.find("codes"); c != j.end() && !c->is_null()) {
    r.codes = string_array(*c, "codes", line_no);
    for (const auto& code : *r.codes) {
      if (code.empty()) throw CorpusError("empty classification code", line_no);
    }
  }
  if (auto refs = j.find("refs"); refs != j.end() && !refs->is_null()) {
    r.refs = string_array(*refs, "refs", line_no);
  }
  if (auto inst = j.find("institutions"); inst != j.end() && !inst->is_null()) {
    if (!inst->is_array()) throw CorpusError("'institutions' must be an array", line_no);
    std::vector<std::vector<std::string>> v;
    for (const auto& e : *inst) v.push_back(string_array(e, "institutions", line_no));
    if (v.size() != r.authors.size()) {
      throw CorpusError("institutions length " + std::to_string(v.size()) + " does not match authors length " +
                            std::to_string(r.authors.size()),
                        line_no);
    }
    r.institutions = std::move(v);
  }
  if (auto cov = j.find("covariates"); cov != j.end() && !cov->is_null()) {
    if (!cov->is_object()) throw CorpusError("'covariates' must be an object", line_no);
    for (const auto& [k, v] : cov->items()) {
      if (!v.is_number()) throw CorpusError("covariate '" + k + "' must be numeric", line_no);
      r.covariates.emplace_back(k, v.get<double>());
    }
    std::sort(r.covariates.begin(), r.covariates.end());
  }
  return r;
}

Corpus build_corpus(std::vector<PaperRecord> records, const EligibilityFilter& filter, ValidationReport report) {
  std::set<std::string> excluded;
  std::vector<bool> keep(records.size(), true);
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& r = records[i];
    if (!r.date || !r.codes) {
      report.warn("incomplete_record");
      keep[i] = false;
      if (filter.policy == MissingFieldPolicy::drop_author) excluded.insert(r.authors.begin(), r.authors.end());
      continue;
    }
    if ((filter.from && *r.date < *filter.from) || (filter.to && *r.date > *filter.to)) {
      report.warn("out_of_date_range");
      keep[i] = false;
    }
  }
  if (!excluded.empty()) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (!keep[i]) continue;
      for (const auto& a : records[i].authors) {
        if (excluded.count(a)) {
          keep[i] = false;
          report.warn("dropped_by_author_policy");
          break;
        }
      }
    }
    report.warn("excluded_author", excluded.size());
  }

  std::vector<std::string> names;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (keep[i]) names.insert(names.end(), records[i].authors.begin(), records[i].authors.end());
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  std::unordered_map<std::string, AuthorId> author_index;
  author_index.reserve(names.size());
  for (std::size_t a = 0; a < names.size(); ++a) author_index.emplace(names[a], static_cast<AuthorId>(a));

  std::unordered_map<std::string, PaperIndex> position;
  CorpusParts parts;
  parts.papers.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!keep[i]) continue;
    if (!position.emplace(records[i].id, static_cast<PaperIndex>(parts.papers.size())).second) {
      throw CorpusError("duplicate paper_id: " + records[i].id);
    }
    parts.papers.emplace_back();
  }
  std::size_t k = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!keep[i]) continue;
    auto& r = records[i];
    Paper& p = parts.papers[k++];
    p.id = std::move(r.id);
    p.date = *r.date;
    for (const auto& a : r.authors) p.authors.push_back(author_index.at(a));
    p.codes = std::move(*r.codes);
    for (auto& ref : r.refs) {
      auto it = position.find(ref);
      if (it == position.end()) {
        report.warn("external_ref");
        p.external_refs.push_back(std::move(ref));
      } else {
        p.refs.push_back(it->second);
      }
    }
    std::sort(p.external_refs.begin(), p.external_refs.end());
    p.external_refs.erase(std::unique(p.external_refs.begin(), p.external_refs.end()), p.external_refs.end());
    p.institutions = std::move(r.institutions);
    p.covariates = std::move(r.covariates);
  }
  parts.author_names = std::move(names);
  parts.report = std::move(report);
  return Corpus::assemble(std::move(parts), filter);
}

Corpus parse_corpus(std::istream& in, const EligibilityFilter& filter) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));

  struct Slot {
    std::optional<PaperRecord> record;
    std::optional<CorpusError> error;
  };
  std::vector<Slot> slots(lines.size());
  parallel_for(lines.size(), [&](std::size_t i) {
    const auto& l = lines[i];
    if (l.find_first_not_of(" \t\r") == std::string::npos) return;
    try {
      slots[i].record = parse_paper_line(l, i + 1);
    } catch (const CorpusError& e) {
      slots[i].error = e;
    }
  });

  ValidationReport report;
  report.lines = lines.size();
  std::vector<PaperRecord> records;
  records.reserve(lines.size());
  for (auto& s : slots) {
    if (s.error) throw *s.error;
    if (s.record) records.push_back(std::move(*s.record));
  }
  return build_corpus(std::move(records), filter, std::move(report));
}

Corpus load_corpus(const std::filesystem::path& path, const EligibilityFilter& filter) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open corpus file " + path.string());
  return parse_corpus(in, filter);
}

std::map<std::string, std::map<std::string, std::string>> load_author_attributes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open author attribute file " + path.string());
  std::map<std::string, std::map<std::string, std::string>> out;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("author_id") || !j["author_id"].is_string()) {
      throw CorpusError("malformed author attribute record", line_no);
    }
    auto& attrs = out[j["author_id"].get<std::string>()];
    if (auto a = j.find("attributes"); a != j.end() && a->is_object()) {
      for (const auto& [k, v] : a->items()) attrs[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
  }
  return out;
}

std::string paper_to_json(const Corpus& corpus, const Paper& paper) {
  json j;
  j["paper_id"] = paper.id;
  j["date"] = paper.date.to_string();
  json authors = json::array();
  for (AuthorId a : paper.authors) authors.push_back(corpus.author_name(a));
  j["authors"] = std::move(authors);
  j["codes"] = paper.codes;
  std::vector<std::string> refs;
  refs.reserve(paper.reference_count());
  for (PaperIndex r : paper.refs) refs.push_back(corpus.paper(r).id);
  refs.insert(refs.end(), paper.external_refs.begin(), paper.external_refs.end());
  j["refs"] = std::move(refs);
  if (paper.institutions) j["institutions"] = *paper.institutions;
  if (!paper.covariates.empty()) {
    json cov = json::object();
    for (const auto& [k, v] : paper.covariates) cov[k] = v;
    j["covariates"] = std::move(cov);
  }
  return j.dump();
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& p : corpus.papers()) out << paper_to_json(corpus, p) << '\n';
}

}  // namespace scout
