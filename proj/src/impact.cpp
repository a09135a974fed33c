#include "scout/impact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "scout/metrics.hpp"

namespace scout {

const char* to_string(ImpactKind k) {
  switch (k) {
    case ImpactKind::log_c5: return "log_c5";
    case ImpactKind::log_c10: return "log_c10";
    case ImpactKind::normalized_v1: return "normalized_v1";
    case ImpactKind::normalized_v2: return "normalized_v2";
    case ImpactKind::percentile_max: return "percentile_max";
    case ImpactKind::percentile_mean: return "percentile_mean";
    case ImpactKind::max_log_c5: return "max_log_c5";
    case ImpactKind::max_log_c10: return "max_log_c10";
  }
  return "?";
}

ImpactKind parse_impact_kind(std::string_view s) {
  for (auto k : {ImpactKind::log_c5, ImpactKind::log_c10, ImpactKind::normalized_v1, ImpactKind::normalized_v2,
                 ImpactKind::percentile_max, ImpactKind::percentile_mean, ImpactKind::max_log_c5,
                 ImpactKind::max_log_c10}) {
    if (s == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown impact kind: " + std::string(s));
}

Aggregate default_aggregate(ImpactKind k) {
  return k == ImpactKind::max_log_c5 || k == ImpactKind::max_log_c10 ? Aggregate::max : Aggregate::mean;
}

namespace {

using Stratum = std::pair<KeyId, int>;  // (area, calendar year)

}  // namespace

ImpactTable::ImpactTable(const Corpus& corpus, const CodeIndex& index, ImpactKind kind) : kind_(kind) {
  const std::size_t n = corpus.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  log_c5_.resize(n);
  for (PaperIndex p = 0; p < n; ++p) log_c5_[p] = log_citations(corpus.citation_count(p, 5));
  values_.assign(n, nan);

  switch (kind) {
    case ImpactKind::log_c5:
    case ImpactKind::max_log_c5:
      values_ = log_c5_;
      return;
    case ImpactKind::log_c10:
    case ImpactKind::max_log_c10:
      for (PaperIndex p = 0; p < n; ++p) values_[p] = log_citations(corpus.citation_count(p, 10));
      return;
    default:
      break;
  }

  // Stratum members in paper order, so sums are reproducible.
  std::map<Stratum, std::vector<PaperIndex>> strata;
  std::vector<int> year(n);
  for (PaperIndex p = 0; p < n; ++p) {
    year[p] = corpus.paper(p).date.year();
    for (KeyId a : index.paper_areas(p)) strata[{a, year[p]}].push_back(p);
  }

  auto area_fraction = [&](PaperIndex p, KeyId a) {
    const auto areas = index.paper_areas(p);
    const auto mult = index.paper_area_multiplicity(p);
    const auto it = std::lower_bound(areas.begin(), areas.end(), a);
    const double total = static_cast<double>(corpus.paper(p).codes.size());
    return static_cast<double>(mult[static_cast<std::size_t>(it - areas.begin())]) / total;
  };

  std::map<Stratum, double> e1, e2;
  std::map<Stratum, std::vector<double>> sorted;
  for (const auto& [key, members] : strata) {
    switch (kind) {
      case ImpactKind::normalized_v1: {
        double s = 0.0;
        for (PaperIndex q : members) s += log_c5_[q];
        e1[key] = s / static_cast<double>(members.size());
        break;
      }
      case ImpactKind::normalized_v2: {
        double s = 0.0, sf = 0.0;
        for (PaperIndex q : members) {
          const double f = area_fraction(q, key.first);
          s += log_c5_[q] * f;
          sf += f;
        }
        e2[key] = s / sf;
        break;
      }
      default: {
        auto& v = sorted[key];
        for (PaperIndex q : members) v.push_back(log_c5_[q]);
        std::sort(v.begin(), v.end());
        break;
      }
    }
  }

  for (PaperIndex p = 0; p < n; ++p) {
    const auto areas = index.paper_areas(p);
    if (areas.empty()) {
      ++excluded_;
      continue;
    }
    double v = nan;
    switch (kind) {
      case ImpactKind::normalized_v1: {
        double s = 0.0;
        for (KeyId a : areas) s += e1.at({a, year[p]});
        const double e = s / static_cast<double>(areas.size());
        if (e > 0.0) v = log_c5_[p] / e;
        break;
      }
      case ImpactKind::normalized_v2: {
        double inv = 0.0;
        bool zero = false;
        for (KeyId a : areas) {
          const double ei = e2.at({a, year[p]});
          if (ei <= 0.0) zero = true;
          inv += 1.0 / ei;
        }
        if (!zero) v = static_cast<double>(areas.size()) / inv;
        if (!std::isnan(v)) v = log_c5_[p] / v;
        break;
      }
      default: {
        double best = 0.0, sum = 0.0;
        for (KeyId a : areas) {
          const auto& s = sorted.at({a, year[p]});
          const auto below = std::lower_bound(s.begin(), s.end(), log_c5_[p]) - s.begin();
          const double pct = 100.0 * static_cast<double>(below) / static_cast<double>(s.size());
          best = std::max(best, pct);
          sum += pct;
        }
        v = kind == ImpactKind::percentile_max ? best : sum / static_cast<double>(areas.size());
        break;
      }
    }
    if (std::isnan(v)) ++excluded_;
    values_[p] = v;
  }
}

double normalize_v1(double c_raw, std::span<const std::vector<double>> area_strata) {
  if (area_strata.empty()) throw std::invalid_argument("paper has no areas");
  double s = 0.0;
  for (const auto& st : area_strata) {
    if (st.empty()) throw std::invalid_argument("empty stratum");
    double m = 0.0;
    for (double v : st) m += v;
    s += m / static_cast<double>(st.size());
  }
  const double e = s / static_cast<double>(area_strata.size());
  return e > 0.0 ? c_raw / e : std::numeric_limits<double>::quiet_NaN();
}

double normalize_v2(double c_raw, std::span<const std::vector<std::pair<double, double>>> area_strata) {
  if (area_strata.empty()) throw std::invalid_argument("paper has no areas");
  double inv = 0.0;
  for (const auto& st : area_strata) {
    double s = 0.0, sf = 0.0;
    for (const auto& [v, f] : st) {
      s += v * f;
      sf += f;
    }
    if (sf <= 0.0) throw std::invalid_argument("empty stratum");
    const double ei = s / sf;
    if (ei <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    inv += 1.0 / ei;
  }
  return c_raw / (static_cast<double>(area_strata.size()) / inv);
}

double percentile_rank(double value, std::span<const double> stratum) {
  if (stratum.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto below = std::count_if(stratum.begin(), stratum.end(), [&](double v) { return v < value; });
  return 100.0 * static_cast<double>(below) / static_cast<double>(stratum.size());
}

double aggregate_impact(const ImpactTable& table, std::span<const PaperIndex> papers, Aggregate how) {
  double s = 0.0, best = -std::numeric_limits<double>::infinity();
  std::size_t n = 0;
  for (PaperIndex p : papers) {
    const double v = table.value(p);
    if (std::isnan(v)) continue;
    s += v;
    best = std::max(best, v);
    ++n;
  }
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  return how == Aggregate::max ? best : s / static_cast<double>(n);
}

}  // namespace scout
