#include "scout/causal/drastic.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

#include "scout/stats/descriptive.hpp"

namespace scout::causal {

namespace {

DrasticDirection analyse(const std::vector<AuthorAnalysisRow>& pre, const std::vector<Group>& post_group, Group from,
                         Group to, const DrasticSpec& spec) {
  DrasticDirection d;
  d.from = from;
  d.to = to;
  std::vector<AuthorAnalysisRow> sample;
  std::vector<std::string> label;
  std::vector<double> switch_delta, stay_delta;
  for (std::size_t i = 0; i < pre.size(); ++i) {
    if (pre[i].group != from) continue;
    ++d.origin;
    const double delta = pre[i].logcit_future - pre[i].logcit_past;
    if (post_group[i] == to) {
      ++d.switchers;
      switch_delta.push_back(delta);
      sample.push_back(pre[i]);
      label.emplace_back("switch");
    } else if (post_group[i] == from) {
      ++d.stayers;
      stay_delta.push_back(delta);
      sample.push_back(pre[i]);
      label.emplace_back("stay");
    }
  }
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  d.fraction = d.origin ? static_cast<double>(d.switchers) / static_cast<double>(d.origin) : 0.0;
  d.switcher_change = switch_delta.empty() ? kNaN : stats::mean(switch_delta);
  d.stayer_change = stay_delta.empty() ? kNaN : stats::mean(stay_delta);
  if (d.switchers < 2 || d.stayers < 2) {
    d.note = d.switchers == 0 ? "no switchers" : "too few switchers or stayers";
    return d;
  }
  stats::Frame frame = to_frame(sample);
  frame.add("switch", label);
  PswSpec ps;
  ps.group_column = "switch";
  ps.groups = {"switch", "stay"};
  ps.baseline = "stay";
  ps.covariates = spec.covariates;
  ps.method = spec.method;
  ps.seed = spec.seed;
  try {
    const auto fit = psw_ate(frame, ps);
    const auto& e = fit.effect("switch");
    d.effect = SwitchEffect{e.estimate, e.se, e.ci_low, e.ci_high, e.p, e.percent};
  } catch (const stats::StatsError& err) {
    d.note = err.what();
  }
  return d;
}

}  // namespace

DrasticResult drastic_change_analysis(const std::vector<AuthorAnalysisRow>& rows_pre,
                                      const std::vector<AuthorAnalysisRow>& rows_post, const DrasticSpec& spec) {
  std::unordered_map<std::string, Group> post;
  for (const auto& r : rows_post) post.emplace(r.author_id, r.group);
  std::vector<Group> post_group;
  post_group.reserve(rows_pre.size());
  for (const auto& r : rows_pre) {
    auto it = post.find(r.author_id);
    post_group.push_back(it == post.end() ? Group::excluded : it->second);
  }
  DrasticResult result;
  result.d_to_a = analyse(rows_pre, post_group, Group::D, Group::A, spec);
  result.a_to_d = analyse(rows_pre, post_group, Group::A, Group::D, spec);
  return result;
}

}  // namespace scout::causal
