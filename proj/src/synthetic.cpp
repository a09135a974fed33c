#include "scout/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <boost/random/poisson_distribution.hpp>

#include "json.hpp"
#include "scout/codes.hpp"
#include "scout/distance.hpp"
#include "scout/impact.hpp"
#include "scout/kernels.hpp"
#include "scout/metrics.hpp"
#include "scout/rng.hpp"
#include "scout/topic_graph.hpp"

namespace scout {

namespace {

constexpr int kInstitutions = 40;
constexpr int kDaysIn5Years = 1826;   // floor(5 · 365.25)
constexpr int kDaysIn10Years = 3652;  // floor(10 · 365.25)

struct Draft {
  Date date;
  int owner = -1;  // generated author index; -1 for filler papers
  int seq = 0;     // position in the owner's career, or filler number
  std::vector<std::string> authors;
  std::vector<std::string> codes;
  std::optional<std::vector<std::vector<std::string>>> institutions;
};

std::string numbered(char prefix, long long n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*lld", prefix, width, n);
  return buf;
}

std::string code_of(int area, int subfield, int code) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%02d.%02d.%02d", 10 + area, 10 + subfield, 10 + code);
  return buf;
}

int ring_distance(int a, int b, int n) {
  const int d = std::abs(a - b) % n;
  return std::min(d, n - d);
}

int poisson(Rng& rng, double mean) {
  if (mean <= 0.0) return 0;
  return boost::random::poisson_distribution<int, double>{mean}(rng.engine());
}

/// `n` distinct day offsets within a calendar year, ascending.
std::vector<int> distinct_days(Rng& rng, int n) {
  std::vector<int> days;
  while (static_cast<int>(days.size()) < n) {
    const int d = static_cast<int>(rng.integer(0, 364));
    if (std::find(days.begin(), days.end(), d) == days.end()) days.push_back(d);
  }
  std::sort(days.begin(), days.end());
  return days;
}

/// k distinct values from [0, m) (Floyd's algorithm), ascending.
std::vector<std::size_t> sample_distinct(Rng& rng, std::size_t m, std::size_t k) {
  std::vector<std::size_t> out;
  if (k >= m) {
    out.resize(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = i;
    return out;
  }
  for (std::size_t j = m - k; j < m; ++j) {
    const std::size_t t = rng.index(j + 1);
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    else out.push_back(j);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> area_codes(Rng& rng, const SynthConfig& cfg, int area, int n) {
  std::vector<std::string> codes;
  while (static_cast<int>(codes.size()) < n) {
    auto c = code_of(area, static_cast<int>(rng.index(static_cast<std::size_t>(cfg.subfields))),
                     static_cast<int>(rng.index(static_cast<std::size_t>(cfg.codes_per_subfield))));
    if (std::find(codes.begin(), codes.end(), c) == codes.end()) codes.push_back(std::move(c));
  }
  return codes;
}

struct AuthorDraft {
  SynthAuthor meta;
  std::vector<Draft> papers;
};

AuthorDraft draft_author(const SynthConfig& cfg, std::uint64_t seed, int a) {
  Rng rng = Rng::for_replicate(seed, static_cast<std::uint64_t>(a));
  AuthorDraft out;
  auto& m = out.meta;
  m.id = numbered('A', a, 5);
  m.first_year = cfg.first_year + static_cast<int>(rng.index(static_cast<std::size_t>(cfg.cohort_years)));
  const double cohort = cfg.cohort_years > 1
                            ? static_cast<double>(m.first_year - cfg.first_year) / (cfg.cohort_years - 1)
                            : 0.5;
  m.explore_rate = std::clamp(cfg.explore_min + (cfg.explore_max - cfg.explore_min) * rng.uniform() +
                                  cfg.cohort_explore_shift * (cohort - 0.5),
                              0.0, 1.0);
  m.far_share = std::clamp(cfg.far_min + (cfg.far_max - cfg.far_min) * rng.uniform() +
                               cfg.cohort_far_shift * (cohort - 0.5),
                           0.0, 1.0);
  m.quality = rng.normal(0.0, cfg.quality_sd);
  m.flipped = rng.bernoulli(cfg.flip_fraction);
  const int home = static_cast<int>(rng.index(static_cast<std::size_t>(cfg.areas)));
  m.home_area = home;
  const int years = static_cast<int>(rng.integer(cfg.career_years_min, cfg.career_years_max));
  const double rate = cfg.rate_min + (cfg.rate_max - cfg.rate_min) * rng.uniform();
  const double phase_p = rng.uniform();
  const double phase_q = rng.uniform();

  std::vector<Date> dates;
  for (int y = 0; y < years; ++y) {
    int n = std::min(poisson(rng, rate), 60);
    if (y == 0) n = std::max(n, 1);
    const auto jan1 = Date::from_ymd(m.first_year + y, 1, 1).days();
    for (int d : distinct_days(rng, n)) dates.emplace_back(jan1 + d);
  }

  const int lookback = cfg.window.mode == LookbackWindow::Mode::papers ? cfg.window.j : 5;
  int institution = static_cast<int>(rng.index(kInstitutions));
  double cum_p = 0.0, cum_q = 0.0;
  std::vector<int> areas;
  for (std::size_t k = 0; k < dates.size(); ++k) {
    const int t = elapsed_years(dates.front(), dates[k]);
    double p = m.explore_rate * (1.0 - cfg.explore_decay * static_cast<double>(t) / years);
    double q = m.far_share;
    if (m.flipped && t >= cfg.flip_year) {
      p = 1.0 - p;
      q = 1.0 - q;
    }
    int area = home;
    if (k > 0) {
      std::vector<int> recent;
      for (std::size_t i = k > static_cast<std::size_t>(lookback) ? k - lookback : 0; i < k; ++i) {
        if (std::find(recent.begin(), recent.end(), areas[i]) == recent.end()) recent.push_back(areas[i]);
      }
      const double prev_p = cum_p;
      cum_p += p;
      const bool explore = std::floor(cum_p + phase_p) > std::floor(prev_p + phase_p);
      const int current = areas[k - 1];
      if (explore) {
        const double prev_q = cum_q;
        cum_q += q;
        const bool far = std::floor(cum_q + phase_q) > std::floor(prev_q + phase_q);
        std::vector<int> candidates, fallback;
        for (int c = 0; c < cfg.areas; ++c) {
          if (std::find(recent.begin(), recent.end(), c) != recent.end()) continue;
          fallback.push_back(c);
          const int d = ring_distance(c, current, cfg.areas);
          if (far ? d >= cfg.areas / 4 : d <= 2) candidates.push_back(c);
        }
        const auto& pick = candidates.empty() ? fallback : candidates;
        area = pick[rng.index(pick.size())];
      } else {
        area = rng.bernoulli(0.6) ? current : recent[rng.index(recent.size())];
      }
    }
    areas.push_back(area);

    Draft d;
    d.date = dates[k];
    d.owner = a;
    d.seq = static_cast<int>(k);
    const int n_codes = 1 + (rng.bernoulli(0.7) ? 1 : 0) + (rng.bernoulli(0.25) ? 1 : 0);
    d.codes = area_codes(rng, cfg, area, n_codes);
    if (rng.bernoulli(0.05)) institution = static_cast<int>(rng.index(kInstitutions));
    std::vector<std::string> guests;
    if (rng.bernoulli(cfg.guest_prob)) {
      const int g = 1 + (rng.bernoulli(0.3) ? 1 : 0);
      for (int j = 0; j < g; ++j) {
        guests.push_back("G" + m.id.substr(1) + "-" + std::to_string(k / 3) + "-" + std::to_string(j));
      }
    }
    const bool lead = rng.bernoulli(0.7) || guests.empty();
    std::vector<std::vector<std::string>> inst;
    if (lead) {
      d.authors.push_back(m.id);
      inst.push_back({numbered('U', institution, 2)});
    }
    for (const auto& g : guests) {
      d.authors.push_back(g);
      inst.push_back({numbered('U', static_cast<long long>(rng.index(kInstitutions)), 2)});
    }
    if (!lead) {
      // middle position when there are two guests, otherwise last
      const auto pos = guests.size() > 1 && rng.bernoulli(0.5) ? d.authors.begin() + 1 : d.authors.end();
      const auto ipos = inst.begin() + (pos - d.authors.begin());
      d.authors.insert(pos, m.id);
      inst.insert(ipos, {numbered('U', institution, 2)});
    }
    d.institutions = std::move(inst);
    out.papers.push_back(std::move(d));
  }
  return out;
}

Draft draft_filler(const SynthConfig& cfg, std::uint64_t seed, std::size_t i, int from_day, int span_days) {
  Rng rng = Rng::for_replicate(seed, i);
  Draft d;
  d.date = Date{from_day + static_cast<std::int32_t>(rng.integer(0, span_days - 1))};
  d.seq = static_cast<int>(i);
  d.authors.push_back(numbered('X', static_cast<long long>(i / 4), 7));
  const int area = static_cast<int>(rng.index(static_cast<std::size_t>(cfg.areas)));
  d.codes = area_codes(rng, cfg, area, 1);
  const int extra = 1 + (rng.bernoulli(0.5) ? 1 : 0);
  for (int e = 0; e < extra; ++e) {
    int other = area;
    if (rng.bernoulli(0.35)) other = (area + (rng.bernoulli(0.5) ? 1 : cfg.areas - 1)) % cfg.areas;
    for (const auto& c : area_codes(rng, cfg, other, 1)) {
      if (std::find(d.codes.begin(), d.codes.end(), c) == d.codes.end()) d.codes.push_back(c);
    }
  }
  return d;
}

PaperRecord to_record(const Draft& d, const std::string& id) {
  PaperRecord r;
  r.id = id;
  r.date = d.date;
  r.authors = d.authors;
  r.codes = d.codes;
  r.institutions = d.institutions;
  return r;
}

}  // namespace

void SynthConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("synth config: ") + what);
  };
  require(authors >= 1, "authors must be positive");
  require(cohort_years >= 1, "cohort_years must be positive");
  require(career_years_min >= 1 && career_years_max >= career_years_min, "career year range is invalid");
  require(rate_min > 0.0 && rate_max >= rate_min, "publication rate range is invalid");
  require(areas >= 8 && areas <= 89, "areas must lie in [8, 89]");
  require(subfields >= 1 && subfields <= 89 && codes_per_subfield >= 3 && codes_per_subfield <= 89,
          "subfield layout is invalid");
  require(explore_min >= 0.0 && explore_max <= 1.0 && explore_min <= explore_max, "explore range is invalid");
  require(far_min >= 0.0 && far_max <= 1.0 && far_min <= far_max, "far-jump range is invalid");
  require(flip_fraction >= 0.0 && flip_fraction <= 1.0, "flip_fraction must lie in [0, 1]");
  require(pool_ratio >= 0.0 && guest_prob >= 0.0 && guest_prob <= 1.0, "pool settings are invalid");
  require(group_quantile > 0.0 && group_quantile <= 50.0, "group_quantile must lie in (0, 50]");
  require(group_split >= 1, "group_split must be positive");
  window.validate();
}

SynthConfig synth_preset(const std::string& name) {
  SynthConfig c;
  if (name == "default" || name == "planted") return c;
  if (name == "four_group") {
    c.beta_ep = 0.0;
    c.beta_ed = 0.0;
    c.group_effect = 0.17;
    c.cohort_effect = 0.3;
    c.cohort_explore_shift = 0.2;
    return c;
  }
  if (name == "mediator") {
    c.mediator_a = 0.5;
    c.mediator_b = 0.3;
    return c;
  }
  if (name == "flip") {
    c.beta_ep = 0.0;
    c.beta_ed = 0.0;
    c.flip_fraction = 0.25;
    c.flip_year = 10;
    c.group_effect = 0.3;
    c.group_split = 10;
    return c;
  }
  if (name == "decay") {
    c.explore_decay = 0.7;
    return c;
  }
  if (name == "cohort_shift") {
    c.cohort_far_shift = 0.8;
    return c;
  }
  if (name == "small") {
    c.authors = 300;
    return c;
  }
  throw std::invalid_argument("unknown synth preset: " + name);
}

SynthResult generate_corpus(const SynthConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  SynthResult result;
  result.seed = seed;
  result.config = cfg;

  std::vector<AuthorDraft> drafts(static_cast<std::size_t>(cfg.authors));
  const std::uint64_t author_seed = mix_seed(seed ^ 0xA17A0ULL);
  run_indexed(Exec::parallel, drafts.size(),
              [&](std::size_t a) { drafts[a] = draft_author(cfg, author_seed, static_cast<int>(a)); });

  std::vector<Draft> papers;
  int last_year = cfg.first_year;
  for (auto& d : drafts) {
    result.author_papers += d.papers.size();
    last_year = std::max(last_year, d.papers.back().date.year());
    for (auto& p : d.papers) papers.push_back(std::move(p));
    d.papers.clear();
  }
  result.pool_papers = static_cast<std::size_t>(std::llround(cfg.pool_ratio * static_cast<double>(result.author_papers)));
  const int from_day = Date::from_ymd(cfg.first_year, 1, 1).days();
  const int span_days = Date::from_ymd(last_year + 7, 1, 1).days() - from_day;
  std::vector<Draft> filler(result.pool_papers);
  const std::uint64_t filler_seed = mix_seed(seed ^ 0xF111E5ULL);
  run_indexed(Exec::parallel, filler.size(),
              [&](std::size_t i) { filler[i] = draft_filler(cfg, filler_seed, i, from_day, span_days); });
  for (auto& f : filler) papers.push_back(std::move(f));
  filler.clear();

  std::sort(papers.begin(), papers.end(), [](const Draft& x, const Draft& y) {
    if (x.date != y.date) return x.date < y.date;
    if (x.owner != y.owner) return x.owner > y.owner;  // authored papers before filler on the same day
    return x.seq < y.seq;
  });
  std::vector<std::string> ids(papers.size());
  std::vector<PaperRecord> records;
  records.reserve(papers.size());
  for (std::size_t i = 0; i < papers.size(); ++i) {
    ids[i] = numbered('P', static_cast<long long>(i), 7);
    records.push_back(to_record(papers[i], ids[i]));
  }

  // First pass: topic graph and realized exploration behaviour.
  const EligibilityFilter filter;
  const Corpus draft_corpus = build_corpus(records, filter);
  const CodeIndex index(draft_corpus, CodeScheme{});
  const TopicGraph graph = build_cooccurrence(draft_corpus, index);
  const DistanceProvider provider(graph, DistanceMetric::weighted_overlap);

  std::map<std::string, Group> reference;
  if (cfg.group_effect != 0.0) {
    const MetricsContext ctx(draft_corpus, index, &provider, cfg.window, DistanceMode::mean);
    const ImpactTable impact(draft_corpus, index, ImpactKind::log_c5);
    RowOptions opts;
    opts.split = SplitPoint::career_years(cfg.group_split);
    opts.future_metrics = false;
    auto rows = build_rows(ctx, impact, opts).rows;
    assign_groups(rows, cfg.group_quantile);
    for (const auto& r : rows) reference.emplace(r.author_id, r.group);
  }

  // Expected log citations of every paper (draft_corpus order equals `papers` order).
  std::vector<double> mu(papers.size(), 0.0);
  std::vector<double> mediator(papers.size(), std::nan(""));
  const bool with_mediator = cfg.mediator_a != 0.0 || cfg.mediator_b != 0.0;
  std::vector<double> area_effect(static_cast<std::size_t>(cfg.areas));
  {
    Rng rng(mix_seed(seed ^ 0xA5EAULL));
    for (double& e : area_effect) e = rng.normal(0.0, cfg.home_area_sd);
  }
  const double ep_fallback = (cfg.explore_min + cfg.explore_max) / 2.0;
  const std::uint64_t outcome_seed = mix_seed(seed ^ 0x0C17E5ULL);
  result.authors.resize(drafts.size());
  run_indexed(Exec::parallel, drafts.size(), [&](std::size_t a) {
    SynthAuthor meta = drafts[a].meta;
    const auto aid = draft_corpus.find_author(meta.id);
    if (auto it = reference.find(meta.id); it != reference.end()) meta.reference_group = it->second;
    result.authors[a] = meta;
    if (!aid) return;
    const auto own = draft_corpus.author_papers(*aid);
    const auto profile = career_profile(draft_corpus, index, own, &provider, cfg.window, DistanceMode::mean);
    Rng rng = Rng::for_replicate(outcome_seed, a);
    const double cohort = cfg.cohort_years > 1
                              ? static_cast<double>(meta.first_year - cfg.first_year) / (cfg.cohort_years - 1)
                              : 0.5;
    const Date first = draft_corpus.paper(own.front()).date;
    for (std::size_t k = 0; k < own.size(); ++k) {
      const auto run = prefix_metrics(profile, k);
      const double ep = run.ep.value_or(ep_fallback);
      const double ed = run.ed.value_or(0.5);
      double m = 0.0;
      if (with_mediator) {
        m = cfg.mediator_a * ep + rng.normal(0.0, cfg.mediator_sd);
        mediator[own[k]] = m;
      }
      double value = cfg.base + meta.quality + area_effect[static_cast<std::size_t>(meta.home_area)] + cfg.beta_ep * ep + cfg.beta_ed * ed +
                     cfg.cohort_effect * (cohort - 0.5) + cfg.mediator_b * m + rng.normal(0.0, cfg.noise_sd);
      if (meta.reference_group == Group::A &&
          days_between(first, draft_corpus.paper(own[k]).date) >= cfg.group_split * kDaysPerYear) {
        value += cfg.group_effect;
      }
      mu[own[k]] = value;
    }
  });
  {
    Rng rng(mix_seed(seed ^ 0x9001ULL));
    for (std::size_t p = 0; p < papers.size(); ++p) {
      if (papers[p].owner < 0) {
        mu[p] = cfg.base - 0.3 + rng.normal(0.0, 0.6);
        if (with_mediator) mediator[p] = rng.normal(0.0, cfg.mediator_sd);
      }
    }
  }

  // Second pass: place citations within five (and ten) years.
  std::vector<std::int32_t> day(papers.size());
  for (std::size_t p = 0; p < papers.size(); ++p) day[p] = papers[p].date.days();
  std::vector<std::vector<std::uint32_t>> citers(papers.size());
  std::vector<std::size_t> shortfall(papers.size(), 0);
  const std::uint64_t cite_seed = mix_seed(seed ^ 0xC17ED0ULL);
  run_indexed(Exec::parallel, papers.size(), [&](std::size_t p) {
    Rng rng = Rng::for_replicate(cite_seed, p);
    const double target = std::min(mu[p], 6.0);
    const auto c5 = static_cast<std::size_t>(std::max(0LL, std::llround(std::expm1(std::max(target, 0.0)))));
    const auto c_late = static_cast<std::size_t>(std::llround(0.25 * static_cast<double>(c5)));
    auto place = [&](std::int32_t lo_day, std::int32_t hi_day, std::size_t k) {
      const auto lo = std::upper_bound(day.begin(), day.end(), lo_day) - day.begin();
      const auto hi = std::upper_bound(day.begin(), day.end(), hi_day) - day.begin();
      const auto m = static_cast<std::size_t>(hi - lo);
      if (k > m) shortfall[p] += k - m;
      for (std::size_t s : sample_distinct(rng, m, k)) citers[p].push_back(static_cast<std::uint32_t>(lo + s));
    };
    place(day[p], day[p] + kDaysIn5Years, c5);
    place(day[p] + kDaysIn5Years, day[p] + kDaysIn10Years, c_late);
  });
  for (std::size_t p = 0; p < papers.size(); ++p) {
    result.citation_shortfall += shortfall[p];
    for (std::uint32_t c : citers[p]) records[c].refs.push_back(ids[p]);
  }
  {
    Rng rng(mix_seed(seed ^ 0xE7E7ULL));
    for (std::size_t p = 0; p < records.size(); ++p) {
      const int n = poisson(rng, cfg.external_ref_mean);
      for (int j = 0; j < n; ++j) records[p].refs.push_back("EXT-" + ids[p] + "-" + std::to_string(j));
      if (with_mediator) records[p].covariates.emplace_back(cfg.mediator_name, mediator[p]);
    }
  }

  Rng attr_rng(mix_seed(seed ^ 0xA77ULL));
  for (const auto& meta : result.authors) {
    result.attributes[meta.id]["gender"] = attr_rng.bernoulli(0.3) ? "f" : "m";
  }
  result.corpus = with_attributes(build_corpus(std::move(records), filter), result.attributes);
  return result;
}

std::string SynthResult::manifest_json() const {
  nlohmann::ordered_json j;
  const auto& c = config;
  j["generator"] = "scout-synth";
  j["seed"] = seed;
  j["config"] = {{"authors", c.authors},
                 {"first_year", c.first_year},
                 {"cohort_years", c.cohort_years},
                 {"career_years_min", c.career_years_min},
                 {"career_years_max", c.career_years_max},
                 {"rate_min", c.rate_min},
                 {"rate_max", c.rate_max},
                 {"areas", c.areas},
                 {"subfields", c.subfields},
                 {"codes_per_subfield", c.codes_per_subfield},
                 {"explore_min", c.explore_min},
                 {"explore_max", c.explore_max},
                 {"far_min", c.far_min},
                 {"far_max", c.far_max},
                 {"explore_decay", c.explore_decay},
                 {"cohort_far_shift", c.cohort_far_shift},
                 {"cohort_explore_shift", c.cohort_explore_shift},
                 {"flip_fraction", c.flip_fraction},
                 {"flip_year", c.flip_year},
                 {"pool_ratio", c.pool_ratio},
                 {"guest_prob", c.guest_prob},
                 {"external_ref_mean", c.external_ref_mean},
                 {"window", c.window.label()}};
  j["planted"] = {{"base", c.base},
                  {"beta_ep", c.beta_ep},
                  {"beta_ed", c.beta_ed},
                  {"quality_sd", c.quality_sd},
                  {"home_area_sd", c.home_area_sd},
                  {"noise_sd", c.noise_sd},
                  {"cohort_effect", c.cohort_effect},
                  {"group_effect", c.group_effect},
                  {"group_split", c.group_split},
                  {"group_quantile", c.group_quantile},
                  {"mediator_name", c.mediator_name},
                  {"mediator_a", c.mediator_a},
                  {"mediator_b", c.mediator_b},
                  {"mediator_sd", c.mediator_sd}};
  j["counts"] = {{"papers", corpus.size()},
                 {"author_papers", author_papers},
                 {"filler_papers", pool_papers},
                 {"eligible_authors", corpus.careers().size()},
                 {"citation_shortfall", citation_shortfall}};
  return j.dump(2) + "\n";
}

void write_synth_authors_csv(std::ostream& out, const SynthResult& result) {
  out << "author_id,first_year,explore_rate,far_share,quality,flipped,reference_group\n";
  for (const auto& a : result.authors) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s,%d,%.17g,%.17g,%.17g,%d,%s\n", a.id.c_str(), a.first_year, a.explore_rate,
                  a.far_share, a.quality, a.flipped ? 1 : 0,
                  a.reference_group == Group::excluded ? "" : to_string(a.reference_group));
    out << buf;
  }
}

void write_attributes(std::ostream& out, const std::map<std::string, std::map<std::string, std::string>>& attrs) {
  for (const auto& [id, values] : attrs) {
    nlohmann::ordered_json j;
    j["author_id"] = id;
    j["attributes"] = values;
    out << j.dump() << '\n';
  }
}

}  // namespace scout
