#include "scout/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scout/stats/descriptive.hpp"
#include "scout/stats/tests.hpp"

namespace scout {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Papers published within the first `years` career years.
std::size_t papers_within(const Corpus& corpus, const AuthorCareer& career, int years) {
  std::size_t m = 0;
  for (PaperIndex p : career.papers) {
    if (elapsed_years(career.first_date, corpus.paper(p).date) >= years) break;
    ++m;
  }
  return m;
}

std::size_t group_slot(Group g) { return static_cast<std::size_t>(g); }

}  // namespace

MeanCi mean_ci(std::span<const double> values) {
  MeanCi r;
  r.n = values.size();
  if (values.empty()) {
    r.mean = r.low = r.high = kNaN;
    return r;
  }
  r.mean = stats::mean(values);
  if (values.size() < 2) {
    r.low = r.high = kNaN;
    return r;
  }
  const double half = 1.96 * stats::sample_sd(values) / std::sqrt(static_cast<double>(values.size()));
  r.low = r.mean - half;
  r.high = r.mean + half;
  return r;
}

Trajectories temporal_trajectories(const MetricsContext& ctx, int max_year) {
  if (max_year < 1) throw stats::StatsError("max_year must be positive");
  const Corpus& corpus = ctx.corpus();
  const auto careers = corpus.careers();
  std::vector<std::vector<double>> ep(static_cast<std::size_t>(max_year)), ed(static_cast<std::size_t>(max_year));
  Trajectories out;
  for (std::size_t c = 0; c < careers.size(); ++c) {
    const auto& career = careers[c];
    const Date last = corpus.paper(career.papers.back()).date;
    if (elapsed_years(career.first_date, last) + 1 < max_year) continue;
    ++out.authors;
    for (int y = 1; y <= max_year; ++y) {
      const auto m = prefix_metrics(ctx.profile(c), papers_within(corpus, career, y));
      if (m.ep) ep[static_cast<std::size_t>(y - 1)].push_back(*m.ep);
      if (m.ed) ed[static_cast<std::size_t>(y - 1)].push_back(*m.ed);
    }
  }
  if (out.authors == 0) throw stats::StatsError("no career spans " + std::to_string(max_year) + " years");
  for (int y = 1; y <= max_year; ++y) {
    out.points.push_back({y, mean_ci(ep[static_cast<std::size_t>(y - 1)]), mean_ci(ed[static_cast<std::size_t>(y - 1)])});
  }
  return out;
}

std::string Cohort::label() const { return std::to_string(first_year_from) + "-" + std::to_string(first_year_to); }

CohortComparison cohort_compare(const MetricsContext& ctx, const std::vector<Cohort>& cohorts, int horizon) {
  if (cohorts.size() < 2) throw stats::StatsError("cohort comparison needs at least two cohorts");
  if (horizon < 1) throw stats::StatsError("horizon must be positive");
  const Corpus& corpus = ctx.corpus();
  const auto careers = corpus.careers();
  CohortComparison out;
  for (const auto& cohort : cohorts) {
    CohortSample s{cohort, {}, {}};
    for (std::size_t c = 0; c < careers.size(); ++c) {
      const int y = careers[c].first_date.year();
      if (y < cohort.first_year_from || y > cohort.first_year_to) continue;
      const auto m = prefix_metrics(ctx.profile(c), papers_within(corpus, careers[c], horizon));
      if (m.ep) s.ep.push_back(*m.ep);
      if (m.ed) s.ed.push_back(*m.ed);
    }
    if (s.ep.empty() || s.ed.empty()) throw stats::StatsError("cohort " + cohort.label() + " is empty");
    out.samples.push_back(std::move(s));
  }
  for (std::size_t a = 0; a < out.samples.size(); ++a) {
    for (std::size_t b = a + 1; b < out.samples.size(); ++b) {
      const auto ks_ep = stats::ks_two_sample(out.samples[a].ep, out.samples[b].ep);
      const auto ks_ed = stats::ks_two_sample(out.samples[a].ed, out.samples[b].ed);
      out.tests.push_back({a, b, "ep", ks_ep.statistic, ks_ep.p});
      out.tests.push_back({a, b, "ed", ks_ed.statistic, ks_ed.p});
    }
  }
  return out;
}

double GroupTransitions::persistence_rate() const {
  return grouped_first ? static_cast<double>(persistent) / static_cast<double>(grouped_first) : kNaN;
}

GroupTransitions group_transitions(const MetricsContext& ctx, std::vector<Date> snapshots, double quantile_pct) {
  if (snapshots.empty()) throw stats::StatsError("no snapshots given");
  std::sort(snapshots.begin(), snapshots.end());
  const Corpus& corpus = ctx.corpus();
  const auto careers = corpus.careers();
  GroupTransitions out;
  out.snapshots = snapshots;
  for (const Date snap : snapshots) {
    std::vector<std::size_t> members;
    std::vector<double> ep, ed;
    for (std::size_t c = 0; c < careers.size(); ++c) {
      std::size_t m = 0;
      while (m < careers[c].papers.size() && corpus.paper(careers[c].papers[m]).date < snap) ++m;
      if (m < 2) continue;
      const auto metrics = prefix_metrics(ctx.profile(c), m);
      if (!metrics.ep || !metrics.ed) continue;
      members.push_back(c);
      ep.push_back(*metrics.ep);
      ed.push_back(*metrics.ed);
    }
    std::vector<Group> groups(careers.size(), Group::excluded);
    if (!members.empty()) {
      const auto g = assign_groups(ep, ed, quantile_pct);
      for (std::size_t k = 0; k < members.size(); ++k) groups[members[k]] = g[k];
    }
    out.membership.push_back(std::move(groups));
  }
  for (std::size_t s = 0; s + 1 < snapshots.size(); ++s) {
    TransitionMatrix t{};
    for (std::size_t c = 0; c < careers.size(); ++c) {
      ++t[group_slot(out.membership[s][c])][group_slot(out.membership[s + 1][c])];
    }
    std::array<double, 4> stay{};
    for (std::size_t g = 0; g < 4; ++g) {
      std::size_t row = 0;
      for (std::size_t h = 0; h < kGroupStates; ++h) row += t[g][h];
      stay[g] = row ? static_cast<double>(t[g][g]) / static_cast<double>(row) : kNaN;
    }
    out.transitions.push_back(t);
    out.stay_rate.push_back(stay);
  }
  for (std::size_t c = 0; c < careers.size(); ++c) {
    const Group first = out.membership[0][c];
    if (first == Group::excluded) continue;
    ++out.grouped_first;
    bool same = true;
    for (const auto& snap : out.membership) same = same && snap[c] == first;
    if (same) ++out.persistent;
  }
  return out;
}

}  // namespace scout
