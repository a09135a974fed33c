#include "scout/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace scout {

void LookbackWindow::validate() const {
  if (mode == Mode::papers && j < 1) throw std::invalid_argument("look-back J must be >= 1");
  if (mode == Mode::years && k < 1) throw std::invalid_argument("look-back K must be >= 1");
}

std::string LookbackWindow::label() const {
  switch (mode) {
    case Mode::papers: return "papers:" + std::to_string(j);
    case Mode::years: return "years:" + std::to_string(k);
    case Mode::all: return "all";
  }
  return "?";
}

void SplitPoint::validate() const {
  if (value < 1) throw std::invalid_argument("split value must be positive");
  if (min_future < 0 || (min_past && *min_past < 0)) throw std::invalid_argument("negative split minimum");
}

int SplitPoint::effective_min_past() const {
  if (min_past) return *min_past;
  return mode == Mode::career_years ? 5 : value;
}

std::string SplitPoint::label() const {
  return (mode == Mode::career_years ? "years:" : "papers:") + std::to_string(value);
}

double log_citations(std::size_t count) { return std::log1p(static_cast<double>(count)); }

std::vector<std::size_t> lookback_positions(std::span<const Date> dates, std::size_t i, const LookbackWindow& w) {
  std::vector<std::size_t> out;
  switch (w.mode) {
    case LookbackWindow::Mode::papers: {
      const std::size_t from = i > static_cast<std::size_t>(w.j) ? i - static_cast<std::size_t>(w.j) : 0;
      for (std::size_t p = from; p < i; ++p) out.push_back(p);
      break;
    }
    case LookbackWindow::Mode::years: {
      const double span = w.k * kDaysPerYear;
      for (std::size_t p = 0; p < i; ++p) {
        const auto gap = days_between(dates[p], dates[i]);
        if (gap > 0 && gap <= span) out.push_back(p);
      }
      break;
    }
    case LookbackWindow::Mode::all:
      for (std::size_t p = 0; p < i; ++p) out.push_back(p);
      break;
  }
  return out;
}

namespace {

template <typename SetOf>
std::vector<KeyId> union_of(const std::vector<std::size_t>& positions, SetOf&& set_of) {
  std::vector<KeyId> u;
  for (std::size_t p : positions) {
    const auto s = set_of(p);
    u.insert(u.end(), s.begin(), s.end());
  }
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

bool has_new(std::span<const KeyId> current, const std::vector<KeyId>& seen) {
  return std::any_of(current.begin(), current.end(),
                     [&](KeyId a) { return !std::binary_search(seen.begin(), seen.end(), a); });
}

}  // namespace

std::vector<bool> exploratory_flags(std::span<const std::vector<KeyId>> area_sets, std::span<const Date> dates,
                                    const LookbackWindow& w) {
  w.validate();
  std::vector<bool> flags(area_sets.size(), false);
  for (std::size_t i = 1; i < area_sets.size(); ++i) {
    const auto seen = union_of(lookback_positions(dates, i, w),
                               [&](std::size_t p) { return std::span<const KeyId>(area_sets[p]); });
    flags[i] = has_new(area_sets[i], seen);
  }
  return flags;
}

std::optional<double> paper_distance(std::span<const KeyId> topics, std::span<const KeyId> lookback_topics,
                                     const DistanceProvider& provider, DistanceMode mode) {
  if (topics.empty() || lookback_topics.empty()) return std::nullopt;
  if (mode == DistanceMode::mean) {
    double s = 0.0;
    for (KeyId t : topics) {
      for (KeyId u : lookback_topics) s += provider.distance(t, u);
    }
    return s / (static_cast<double>(topics.size()) * static_cast<double>(lookback_topics.size()));
  }
  double worst = 0.0;
  for (KeyId t : topics) {
    double best = std::numeric_limits<double>::infinity();
    for (KeyId u : lookback_topics) best = std::min(best, provider.distance(t, u));
    worst = std::max(worst, best);
  }
  return worst;
}

CareerProfile career_profile(const CodeIndex& index, std::span<const PaperIndex> papers, std::span<const Date> dates,
                             const DistanceProvider* provider, const LookbackWindow& w, DistanceMode mode) {
  w.validate();
  CareerProfile prof;
  const std::size_t n = papers.size();
  prof.exploratory.assign(n, 0);
  prof.distance.assign(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i < n; ++i) {
    const auto pos = lookback_positions(dates, i, w);
    const auto areas = union_of(pos, [&](std::size_t p) { return index.paper_areas(papers[p]); });
    prof.exploratory[i] = has_new(index.paper_areas(papers[i]), areas) ? 1 : 0;
    if (provider) {
      const auto topics = union_of(pos, [&](std::size_t p) { return index.paper_topics(papers[p]); });
      if (auto d = paper_distance(index.paper_topics(papers[i]), topics, *provider, mode)) prof.distance[i] = *d;
    }
  }
  return prof;
}

CareerProfile career_profile(const Corpus& corpus, const CodeIndex& index, std::span<const PaperIndex> papers,
                             const DistanceProvider* provider, const LookbackWindow& w, DistanceMode mode) {
  std::vector<Date> dates;
  dates.reserve(papers.size());
  for (PaperIndex p : papers) dates.push_back(corpus.paper(p).date);
  return career_profile(index, papers, dates, provider, w, mode);
}

ExplorationMetrics prefix_metrics(const CareerProfile& profile, std::size_t m) {
  ExplorationMetrics out;
  m = std::min(m, profile.exploratory.size());
  out.papers = m;
  if (m < 2) return out;
  double dsum = 0.0;
  std::size_t dcount = 0;
  for (std::size_t i = 1; i < m; ++i) {
    out.exploratory += profile.exploratory[i];
    if (std::isnan(profile.distance[i])) {
      ++out.undefined_distances;
    } else {
      dsum += profile.distance[i];
      ++dcount;
    }
  }
  out.ep = static_cast<double>(out.exploratory) / static_cast<double>(m - 1);
  if (dcount > 0) out.ed = dsum / static_cast<double>(dcount);
  return out;
}

ExplorationMetrics exploration_metrics(const Corpus& corpus, const CodeIndex& index,
                                       std::span<const PaperIndex> papers, const DistanceProvider* provider,
                                       const LookbackWindow& w, DistanceMode mode, std::optional<Date> up_to) {
  std::size_t m = papers.size();
  if (up_to) {
    m = 0;
    while (m < papers.size() && corpus.paper(papers[m]).date < *up_to) ++m;
  }
  const auto prof = career_profile(corpus, index, papers.first(m), provider, w, mode);
  auto out = prefix_metrics(prof, m);
  if (!provider) out.undefined_distances = 0;
  return out;
}

std::optional<double> ep(const Corpus& corpus, const CodeIndex& index, const AuthorCareer& career,
                         const LookbackWindow& w, std::optional<Date> up_to) {
  return exploration_metrics(corpus, index, career.papers, nullptr, w, DistanceMode::mean, up_to).ep;
}

std::optional<double> ed(const Corpus& corpus, const CodeIndex& index, const AuthorCareer& career,
                         const DistanceProvider& provider, const LookbackWindow& w, DistanceMode mode,
                         std::optional<Date> up_to) {
  return exploration_metrics(corpus, index, career.papers, &provider, w, mode, up_to).ed;
}

SplitResult split_author(std::span<const Date> dates, const SplitPoint& split) {
  split.validate();
  SplitResult r;
  if (dates.empty()) return r;
  if (split.mode == SplitPoint::Mode::career_years) {
    const double limit = split.value * kDaysPerYear;
    while (r.past < dates.size() && days_between(dates.front(), dates[r.past]) < limit) ++r.past;
  } else {
    r.past = std::min(dates.size(), static_cast<std::size_t>(split.value));
  }
  r.future = dates.size() - r.past;
  r.eligible = r.past >= static_cast<std::size_t>(split.effective_min_past()) &&
               r.future >= static_cast<std::size_t>(split.min_future) && r.past >= 1;
  return r;
}

SplitResult split_author(const Corpus& corpus, const AuthorCareer& career, const SplitPoint& split) {
  std::vector<Date> dates;
  for (PaperIndex p : career.papers) dates.push_back(corpus.paper(p).date);
  return split_author(dates, split);
}

MetricsContext::MetricsContext(const Corpus& corpus, const CodeIndex& index, const DistanceProvider* provider,
                               LookbackWindow window, DistanceMode mode, Exec exec)
    : corpus_(corpus), index_(index), provider_(provider), window_(window), mode_(mode) {
  window_.validate();
  const auto careers = corpus.careers();
  profiles_.resize(careers.size());
  run_indexed(exec, careers.size(), [&](std::size_t c) {
    profiles_[c] = career_profile(corpus_, index_, careers[c].papers, provider_, window_, mode_);
  });
}

}  // namespace scout
