#include "scout/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>

#include "scout/format.hpp"
#include "scout/stats/descriptive.hpp"

namespace scout {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double opt(const std::optional<double>& v) { return v ? *v : kNaN; }
}  // namespace

const char* to_string(Group g) {
  switch (g) {
    case Group::A: return "A";
    case Group::B: return "B";
    case Group::C: return "C";
    case Group::D: return "D";
    case Group::excluded: return "excluded";
  }
  return "?";
}

Group group_of(bool high_ep, bool high_ed) {
  if (high_ep) return high_ed ? Group::C : Group::A;
  return high_ed ? Group::D : Group::B;
}

// ---------------------------------------------------------------------------
// Covariates

CovariateBuilder::CovariateBuilder(const Corpus& corpus, const CodeIndex& index, CovariateConfig config)
    : corpus_(corpus), index_(index), config_(std::move(config)) {
  std::map<int, std::size_t> per_year;
  std::map<std::pair<KeyId, int>, std::size_t> per_area;
  std::set<std::string> ext;
  for (PaperIndex p = 0; p < corpus.size(); ++p) {
    const int y = corpus.paper(p).date.year();
    ++per_year[y];
    for (KeyId a : index.paper_areas(p)) ++per_area[{a, y}];
    for (const auto& [k, v] : corpus.paper(p).covariates) ext.insert(k);
  }
  for (const auto& [key, n] : per_area) {
    popularity_[key] = static_cast<double>(n) / static_cast<double>(per_year.at(key.second));
  }
  external_names_.assign(ext.begin(), ext.end());
}

double CovariateBuilder::popularity(KeyId area, int year) const {
  auto it = popularity_.find({area, year});
  return it == popularity_.end() ? 0.0 : it->second;
}

std::vector<KeyId> CovariateBuilder::recent_topics(AuthorId author, PaperIndex before) const {
  const auto papers = corpus_.author_papers(author);
  const auto end = std::lower_bound(papers.begin(), papers.end(), before);
  const auto lookback = static_cast<std::ptrdiff_t>(config_.importation_lookback);
  const auto begin = end - std::min(lookback, end - papers.begin());
  std::vector<KeyId> t;
  for (auto it = begin; it != end; ++it) {
    const auto pt = index_.paper_topics(*it);
    t.insert(t.end(), pt.begin(), pt.end());
  }
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

std::pair<std::size_t, std::size_t> CovariateBuilder::importation(AuthorId author, PaperIndex p) const {
  const auto topics = index_.paper_topics(p);
  const auto mine = recent_topics(author, p);
  std::vector<KeyId> others;
  for (AuthorId b : corpus_.paper(p).authors) {
    if (b == author) continue;
    const auto t = recent_topics(b, p);
    others.insert(others.end(), t.begin(), t.end());
  }
  std::sort(others.begin(), others.end());
  others.erase(std::unique(others.begin(), others.end()), others.end());
  std::size_t focal = 0, other = 0;
  for (KeyId t : topics) {
    focal += std::binary_search(mine.begin(), mine.end(), t) ? 1 : 0;
    other += std::binary_search(others.begin(), others.end(), t) ? 1 : 0;
  }
  return {focal, other};
}

void CovariateBuilder::add(std::map<std::string, double>& out, AuthorId author, std::span<const PaperIndex> papers,
                           const std::string& suffix) const {
  double team = 0.0, lead = 0.0, pop_mean = 0.0, pop_max = 0.0, imp = 0.0;
  std::size_t pop_n = 0, imp_n = 0, inst_papers = 0;
  std::set<std::string> insts;
  bool ivy = false;
  std::map<std::string, std::pair<double, std::size_t>> ext;
  for (PaperIndex p : papers) {
    const Paper& paper = corpus_.paper(p);
    team += static_cast<double>(paper.authors.size());
    if (paper.authors.front() == author || paper.authors.back() == author) lead += 1.0;

    const auto areas = index_.paper_areas(p);
    if (!areas.empty()) {
      const int y = paper.date.year();
      double s = 0.0, m = 0.0;
      for (KeyId a : areas) {
        const double v = popularity(a, y);
        s += v;
        m = std::max(m, v);
      }
      pop_mean += s / static_cast<double>(areas.size());
      pop_max += m;
      ++pop_n;
    }

    const auto [focal, other] = importation(author, p);
    if (paper.authors.size() > 1 && focal + other > 0) {
      imp += static_cast<double>(other) / static_cast<double>(focal + other);
      ++imp_n;
    }

    if (paper.institutions) {
      ++inst_papers;
      const auto pos = static_cast<std::size_t>(
          std::find(paper.authors.begin(), paper.authors.end(), author) - paper.authors.begin());
      for (const auto& i : (*paper.institutions)[pos]) {
        insts.insert(i);
        if (std::find(config_.ivy_institutions.begin(), config_.ivy_institutions.end(), i) !=
            config_.ivy_institutions.end()) {
          ivy = true;
        }
      }
    }
    for (const auto& [k, v] : paper.covariates) {
      auto& e = ext[k];
      e.first += v;
      ++e.second;
    }
  }
  const double n = static_cast<double>(papers.size());
  out["team_size" + suffix] = papers.empty() ? kNaN : team / n;
  out["lead_author_fraction" + suffix] = papers.empty() ? kNaN : lead / n;
  out["popularity_mean" + suffix] = pop_n ? pop_mean / static_cast<double>(pop_n) : kNaN;
  out["popularity_max" + suffix] = pop_n ? pop_max / static_cast<double>(pop_n) : kNaN;
  out["coauthor_contribution" + suffix] = imp_n ? imp / static_cast<double>(imp_n) : kNaN;
  out["institution_change" + suffix] =
      inst_papers ? static_cast<double>(insts.size()) / static_cast<double>(inst_papers) : kNaN;
  if (!config_.ivy_institutions.empty()) out["ivy" + suffix] = inst_papers ? (ivy ? 1.0 : 0.0) : kNaN;
  for (const auto& name : external_names_) {
    auto it = ext.find(name);
    out["ext_" + name + suffix] = it == ext.end() ? kNaN : it->second.first / static_cast<double>(it->second.second);
  }
}

// ---------------------------------------------------------------------------
// Rows

RowSet build_rows(const MetricsContext& ctx, const ImpactTable& impact, const RowOptions& options, Exec exec) {
  const Corpus& corpus = ctx.corpus();
  const auto careers = corpus.careers();
  const Aggregate how = default_aggregate(impact.kind());
  std::optional<CovariateBuilder> cov;
  if (options.covariates.enabled) cov.emplace(corpus, ctx.index(), options.covariates);

  enum class Outcome : std::uint8_t { row, split_excluded, undefined };
  std::vector<Outcome> outcome(careers.size(), Outcome::row);
  std::vector<AuthorAnalysisRow> slots(careers.size());

  run_indexed(exec, careers.size(), [&](std::size_t c) {
    const AuthorCareer& career = careers[c];
    std::vector<Date> dates;
    dates.reserve(career.papers.size());
    for (PaperIndex p : career.papers) dates.push_back(corpus.paper(p).date);
    const auto split = split_author(dates, options.split);
    if (!split.eligible) {
      outcome[c] = Outcome::split_excluded;
      return;
    }
    const auto past = prefix_metrics(ctx.profile(c), split.past);
    if (!past.ep || !past.ed) {
      outcome[c] = Outcome::undefined;
      return;
    }
    const std::span<const PaperIndex> all(career.papers);
    const auto past_papers = all.first(split.past);
    const auto future_papers = all.subspan(split.past);

    AuthorAnalysisRow& r = slots[c];
    r.author_id = career.id;
    r.career = c;
    r.ep_past = *past.ep;
    r.ed_past = *past.ed;
    r.ep_future = r.ed_future = kNaN;
    if (options.future_metrics) {
      const auto prof = career_profile(ctx.index(), future_papers, std::span<const Date>(dates).subspan(split.past),
                                       ctx.provider(), ctx.window(), ctx.mode());
      const auto fut = prefix_metrics(prof, future_papers.size());
      r.ep_future = opt(fut.ep);
      r.ed_future = opt(fut.ed);
    }
    r.logcit_past = aggregate_impact(impact, past_papers, how);
    r.logcit_future = aggregate_impact(impact, future_papers, how);
    r.p_past = static_cast<int>(split.past);
    r.p_future = static_cast<int>(split.future);
    r.year_first = std::to_string(career.first_date.year());
    if (auto a = ctx.index().first_area(career.papers.front())) r.area_first = ctx.index().areas()[*a];
    if (cov) {
      cov->add(r.covariates, career.author, past_papers, "_past");
      cov->add(r.covariates, career.author, future_papers, "_future");
    }
    if (const auto* attrs = corpus.attributes(career.id)) r.attributes = *attrs;
  });

  RowSet set;
  set.careers = careers.size();
  for (std::size_t c = 0; c < careers.size(); ++c) {
    switch (outcome[c]) {
      case Outcome::row: set.rows.push_back(std::move(slots[c])); break;
      case Outcome::split_excluded: ++set.split_excluded; break;
      case Outcome::undefined: ++set.metric_undefined; break;
    }
  }
  return set;
}

// ---------------------------------------------------------------------------
// Groups

std::vector<int> quantile_levels(std::span<const double> values, double quantile_pct, double* high, double* low,
                                 bool* degenerate) {
  if (!(quantile_pct > 0.0 && quantile_pct <= 50.0)) throw std::invalid_argument("group quantile must be in (0, 50]");
  std::vector<double> defined;
  for (double v : values) {
    if (!std::isnan(v)) defined.push_back(v);
  }
  std::vector<int> out(values.size(), 0);
  if (defined.empty()) return out;
  std::sort(defined.begin(), defined.end());
  const double hi = stats::quantile_sorted(defined, 1.0 - quantile_pct / 100.0);
  const double lo = stats::quantile_sorted(defined, quantile_pct / 100.0);
  if (high) *high = hi;
  if (low) *low = lo;
  if (degenerate) *degenerate = defined.front() == defined.back();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i])) continue;
    if (values[i] >= hi) {
      out[i] = 1;
    } else if (values[i] <= lo) {
      out[i] = -1;
    }
  }
  return out;
}

std::vector<Group> assign_groups(std::span<const double> ep, std::span<const double> ed, double quantile_pct,
                                 GroupingInfo* info) {
  if (ep.size() != ed.size()) throw std::invalid_argument("EP and ED lengths differ");
  GroupingInfo local;
  GroupingInfo& gi = info ? *info : local;
  const auto le = quantile_levels(ep, quantile_pct, &gi.ep_high, &gi.ep_low, &gi.degenerate_ep);
  const auto ld = quantile_levels(ed, quantile_pct, &gi.ed_high, &gi.ed_low, &gi.degenerate_ed);
  std::vector<Group> out(ep.size(), Group::excluded);
  gi.counts.fill(0);
  for (std::size_t i = 0; i < ep.size(); ++i) {
    if (le[i] != 0 && ld[i] != 0) out[i] = group_of(le[i] > 0, ld[i] > 0);
    ++gi.counts[static_cast<std::size_t>(out[i])];
  }
  return out;
}

GroupingInfo assign_groups(std::vector<AuthorAnalysisRow>& rows, double quantile_pct, bool on_future) {
  std::vector<double> ep, ed;
  for (const auto& r : rows) {
    ep.push_back(on_future ? r.ep_future : r.ep_past);
    ed.push_back(on_future ? r.ed_future : r.ed_past);
  }
  GroupingInfo info;
  const auto g = assign_groups(ep, ed, quantile_pct, &info);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].group = g[i];
  return info;
}

// ---------------------------------------------------------------------------
// Export

namespace {

std::vector<std::string> covariate_names(const std::vector<AuthorAnalysisRow>& rows) {
  std::set<std::string> s;
  for (const auto& r : rows) {
    for (const auto& [k, v] : r.covariates) s.insert(k);
  }
  return {s.begin(), s.end()};
}

std::vector<std::string> attribute_names(const std::vector<AuthorAnalysisRow>& rows) {
  std::set<std::string> s;
  for (const auto& r : rows) {
    for (const auto& [k, v] : r.attributes) s.insert(k);
  }
  return {s.begin(), s.end()};
}

}  // namespace

stats::Frame to_frame(const std::vector<AuthorAnalysisRow>& rows) {
  stats::Frame f;
  f.rows = rows.size();
  auto num = [&](const std::string& name, auto get) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(get(r));
    f.add(name, std::move(v));
  };
  auto cat = [&](const std::string& name, auto get) {
    std::vector<std::string> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(get(r));
    f.add(name, std::move(v));
  };
  num("ep_past", [](const auto& r) { return r.ep_past; });
  num("ed_past", [](const auto& r) { return r.ed_past; });
  num("ep_future", [](const auto& r) { return r.ep_future; });
  num("ed_future", [](const auto& r) { return r.ed_future; });
  num("logcit_past", [](const auto& r) { return r.logcit_past; });
  num("logcit_future", [](const auto& r) { return r.logcit_future; });
  num("p_past", [](const auto& r) { return static_cast<double>(r.p_past); });
  num("p_future", [](const auto& r) { return static_cast<double>(r.p_future); });
  cat("author_id", [](const auto& r) { return r.author_id; });
  cat("year_first", [](const auto& r) { return r.year_first; });
  cat("area_first", [](const auto& r) { return r.area_first; });
  cat("group", [](const auto& r) { return r.group == Group::excluded ? std::string() : to_string(r.group); });
  for (const auto& name : covariate_names(rows)) {
    num(name, [&](const auto& r) {
      auto it = r.covariates.find(name);
      return it == r.covariates.end() ? kNaN : it->second;
    });
  }
  for (const auto& name : attribute_names(rows)) {
    cat("attr_" + name, [&](const auto& r) {
      auto it = r.attributes.find(name);
      return it == r.attributes.end() ? std::string() : it->second;
    });
  }
  return f;
}

void write_rows_csv(std::ostream& out, const std::vector<AuthorAnalysisRow>& rows) {
  const auto cov = covariate_names(rows);
  const auto attr = attribute_names(rows);
  out << "author_id,group,year_first,area_first,p_past,p_future,ep_past,ed_past,ep_future,ed_future,"
         "logcit_past,logcit_future";
  for (const auto& c : cov) out << ',' << csv_field(c);
  for (const auto& a : attr) out << ',' << csv_field("attr_" + a);
  out << '\n';
  for (const auto& r : rows) {
    out << csv_field(r.author_id) << ',' << to_string(r.group) << ',' << r.year_first << ','
        << csv_field(r.area_first) << ',' << r.p_past << ',' << r.p_future << ',' << fmt_double(r.ep_past) << ','
        << fmt_double(r.ed_past) << ',' << fmt_double(r.ep_future) << ',' << fmt_double(r.ed_future) << ','
        << fmt_double(r.logcit_past) << ',' << fmt_double(r.logcit_future);
    for (const auto& c : cov) {
      auto it = r.covariates.find(c);
      out << ',' << (it == r.covariates.end() ? std::string() : fmt_double(it->second));
    }
    for (const auto& a : attr) {
      auto it = r.attributes.find(a);
      out << ',' << (it == r.attributes.end() ? std::string() : csv_field(it->second));
    }
    out << '\n';
  }
}

}  // namespace scout
