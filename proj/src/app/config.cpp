#include "scout/app/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tomlplusplus/toml.hpp"

namespace scout::app {

namespace {

using nlohmann::ordered_json;

/// Typed access to one TOML table that rejects keys nobody asked about.
class Section {
 public:
  Section(const toml::table* table, std::string name) : table_(table), name_(std::move(name)) {}

  [[nodiscard]] bool present() const { return table_ != nullptr; }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!table_) return;
    const auto* node = table_->get(key);
    if (!node) return;
    if constexpr (std::is_same_v<T, double>) {
      if (auto v = node->value<double>()) {
        out = *v;
        return;
      }
    } else if constexpr (std::is_same_v<T, bool>) {
      if (auto v = node->value<bool>()) {
        out = *v;
        return;
      }
    } else if constexpr (std::is_integral_v<T>) {
      if (auto v = node->value<std::int64_t>()) {
        if (*v < 0 && std::is_unsigned_v<T>) fail(key, "must be non-negative");
        out = static_cast<T>(*v);
        return;
      }
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (auto v = node->value<std::string>()) {
        out = *v;
        return;
      }
    }
    fail(key, "has the wrong type");
  }

  template <typename T>
  std::optional<T> optional(const char* key) {
    seen_.insert(key);
    if (!table_ || !table_->get(key)) return std::nullopt;
    T v{};
    get(key, v);
    return v;
  }

  const toml::array* array(const char* key) {
    seen_.insert(key);
    if (!table_) return nullptr;
    const auto* node = table_->get(key);
    if (!node) return nullptr;
    if (!node->is_array()) fail(key, "must be an array");
    return node->as_array();
  }

  template <typename T>
  std::optional<std::vector<T>> list(const char* key) {
    const auto* arr = array(key);
    if (!arr) return std::nullopt;
    std::vector<T> out;
    for (const auto& el : *arr) {
      if constexpr (std::is_same_v<T, double>) {
        auto v = el.value<double>();
        if (!v) fail(key, "must hold numbers");
        out.push_back(*v);
      } else if constexpr (std::is_integral_v<T>) {
        auto v = el.value<std::int64_t>();
        if (!v) fail(key, "must hold integers");
        out.push_back(static_cast<T>(*v));
      } else {
        auto v = el.value<std::string>();
        if (!v) fail(key, "must hold strings");
        out.push_back(*v);
      }
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(name_ + "." + key + " " + what);
  }

  void finish() const {
    if (!table_) return;
    for (const auto& [k, _] : *table_) {
      if (!seen_.count(std::string(k.str()))) throw ConfigError("unknown key " + name_ + "." + std::string(k.str()));
    }
  }

 private:
  const toml::table* table_;
  std::string name_;
  std::set<std::string> seen_;
};

Date parse_date(const std::string& s, const std::string& where) {
  auto d = Date::parse(s);
  if (!d) throw ConfigError(where + ": invalid date '" + s + "'");
  return *d;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

LookbackWindow::Mode window_mode(const std::string& s) {
  if (s == "papers") return LookbackWindow::Mode::papers;
  if (s == "years") return LookbackWindow::Mode::years;
  if (s == "all") return LookbackWindow::Mode::all;
  throw ConfigError("window.mode must be papers, years or all");
}

const char* window_mode_name(LookbackWindow::Mode m) {
  switch (m) {
    case LookbackWindow::Mode::papers: return "papers";
    case LookbackWindow::Mode::years: return "years";
    case LookbackWindow::Mode::all: return "all";
  }
  return "";
}

causal::TreatOn treat_on(const std::string& s) {
  if (s == "ep") return causal::TreatOn::ep;
  if (s == "ed") return causal::TreatOn::ed;
  if (s == "group_pair") return causal::TreatOn::group_pair;
  throw ConfigError("psm.treat_on must be ep, ed or group_pair");
}

const char* treat_on_name(causal::TreatOn t) {
  switch (t) {
    case causal::TreatOn::ep: return "ep";
    case causal::TreatOn::ed: return "ed";
    case causal::TreatOn::group_pair: return "group_pair";
  }
  return "";
}

GraphKind graph_kind(const std::string& s) {
  if (s == "cooccurrence") return GraphKind::cooccurrence;
  if (s == "citation") return GraphKind::citation;
  if (s == "cociting") return GraphKind::cociting;
  throw ConfigError("graph.kind must be cooccurrence, citation or cociting");
}

DistanceMetric metric_of(const std::string& s) {
  if (s == "weighted_overlap") return DistanceMetric::weighted_overlap;
  if (s == "jaccard") return DistanceMetric::jaccard;
  if (s == "directed_overlap") return DistanceMetric::directed_overlap;
  throw ConfigError("graph.metric must be weighted_overlap, jaccard or directed_overlap");
}

std::vector<int> range_list(Section& s, const char* key, std::vector<int> fallback) {
  if (auto v = s.list<int>(key)) return *v;
  return fallback;
}

std::vector<int> iota_range(int lo, int hi) {
  std::vector<int> v;
  for (int i = lo; i <= hi; ++i) v.push_back(i);
  return v;
}

void read_synth(Section& s, SynthConfig& c) {
  s.get("authors", c.authors);
  s.get("first_year", c.first_year);
  s.get("cohort_years", c.cohort_years);
  s.get("career_years_min", c.career_years_min);
  s.get("career_years_max", c.career_years_max);
  s.get("rate_min", c.rate_min);
  s.get("rate_max", c.rate_max);
  s.get("areas", c.areas);
  s.get("subfields", c.subfields);
  s.get("codes_per_subfield", c.codes_per_subfield);
  s.get("explore_min", c.explore_min);
  s.get("explore_max", c.explore_max);
  s.get("far_min", c.far_min);
  s.get("far_max", c.far_max);
  s.get("explore_decay", c.explore_decay);
  s.get("cohort_far_shift", c.cohort_far_shift);
  s.get("cohort_explore_shift", c.cohort_explore_shift);
  s.get("flip_fraction", c.flip_fraction);
  s.get("flip_year", c.flip_year);
  s.get("pool_ratio", c.pool_ratio);
  s.get("guest_prob", c.guest_prob);
  s.get("external_ref_mean", c.external_ref_mean);
  s.get("base", c.base);
  s.get("beta_ep", c.beta_ep);
  s.get("beta_ed", c.beta_ed);
  s.get("quality_sd", c.quality_sd);
  s.get("home_area_sd", c.home_area_sd);
  s.get("noise_sd", c.noise_sd);
  s.get("cohort_effect", c.cohort_effect);
  s.get("group_effect", c.group_effect);
  s.get("group_split", c.group_split);
  s.get("group_quantile", c.group_quantile);
  s.get("mediator_a", c.mediator_a);
  s.get("mediator_b", c.mediator_b);
  s.get("mediator_sd", c.mediator_sd);
  s.get("mediator_name", c.mediator_name);
}

ordered_json synth_json(const SynthConfig& c) {
  return {{"authors", c.authors},
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
          {"base", c.base},
          {"beta_ep", c.beta_ep},
          {"beta_ed", c.beta_ed},
          {"quality_sd", c.quality_sd},
          {"home_area_sd", c.home_area_sd},
          {"noise_sd", c.noise_sd},
          {"cohort_effect", c.cohort_effect},
          {"group_effect", c.group_effect},
          {"group_split", c.group_split},
          {"group_quantile", c.group_quantile},
          {"mediator_a", c.mediator_a},
          {"mediator_b", c.mediator_b},
          {"mediator_sd", c.mediator_sd},
          {"mediator_name", c.mediator_name},
          {"window", c.window.label()}};
}

ordered_json design_json(const stats::DesignSpec& d) {
  ordered_json cats = ordered_json::array();
  for (const auto& c : d.categorical) cats.push_back(c.reference ? c.name + ":" + *c.reference : c.name);
  return {{"intercept", d.intercept}, {"numeric", d.numeric}, {"categorical", cats}};
}

}  // namespace

RunConfig default_config() {
  RunConfig c;
  c.sweep.splits = iota_range(2, 15);
  c.sweep.window_j = iota_range(1, 15);
  c.sweep.window_k = iota_range(1, 15);
  c.sweep.quantiles = {50, 40, 30, 25};
  c.sweep.digits = {{2, 2}, {2, 4}, {4, 4}, {4, 6}, {2, 6}};
  c.cohorts = {{1980, 1986}, {1987, 1993}, {1994, 2000}};
  c.mediation.treatment = "ep_past";
  c.mediation.mediator = "ext_novelty_future";
  c.mediation.outcome = "logcit_future";
  c.mediation.controls.numeric = {"logcit_past", "p_past"};
  return c;
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "config parse error at line " << e.source().begin.line << ": " << e.description();
    throw ConfigError(msg.str());
  }
  RunConfig c = default_config();
  auto section = [&](const char* name) { return Section(root[name].as_table(), name); };
  static const std::set<std::string> known = {"corpus", "codes", "graph", "window", "distance", "split", "impact",
                                              "group", "covariates", "regress", "analyses", "psm", "psw", "null",
                                              "mediation", "cohorts", "transitions", "trajectories", "stability",
                                              "drastic", "sweep", "synth", "run"};
  for (const auto& [k, v] : root) {
    if (!known.count(std::string(k.str()))) throw ConfigError("unknown section " + std::string(k.str()));
    if (!v.is_table()) throw ConfigError("section " + std::string(k.str()) + " must be a table");
  }

  {
    auto s = section("corpus");
    if (auto p = s.optional<std::string>("path")) c.corpus = resolve(base_dir, *p);
    if (auto p = s.optional<std::string>("attributes")) c.attributes = resolve(base_dir, *p);
    s.get("min_papers", c.filter.min_papers);
    if (auto d = s.optional<std::string>("from")) c.filter.from = parse_date(*d, "corpus.from");
    if (auto d = s.optional<std::string>("to")) c.filter.to = parse_date(*d, "corpus.to");
    if (auto m = s.optional<std::string>("missing")) {
      if (*m == "drop_paper") c.filter.policy = MissingFieldPolicy::drop_paper;
      else if (*m == "drop_author") c.filter.policy = MissingFieldPolicy::drop_author;
      else s.fail("missing", "must be drop_paper or drop_author");
    }
    s.finish();
  }
  {
    auto s = section("codes");
    s.get("area_digits", c.analysis.scheme.area_prefix_len);
    if (auto t = s.optional<int>("topic_digits")) c.analysis.scheme.topic_prefix_len = *t;
    s.get("separators", c.analysis.scheme.separators);
    s.finish();
  }
  {
    auto s = section("graph");
    if (auto k = s.optional<std::string>("kind")) c.analysis.graph = graph_kind(*k);
    if (auto m = s.optional<std::string>("metric")) c.analysis.metric = metric_of(*m);
    s.finish();
  }
  {
    auto s = section("window");
    if (auto m = s.optional<std::string>("mode")) c.analysis.window.mode = window_mode(*m);
    s.get("j", c.analysis.window.j);
    s.get("k", c.analysis.window.k);
    s.finish();
  }
  {
    auto s = section("distance");
    if (auto m = s.optional<std::string>("mode")) {
      if (*m == "mean") c.analysis.mode = DistanceMode::mean;
      else if (*m == "hausdorff") c.analysis.mode = DistanceMode::hausdorff;
      else s.fail("mode", "must be mean or hausdorff");
    }
    s.finish();
  }
  {
    auto s = section("split");
    if (auto m = s.optional<std::string>("mode")) {
      if (*m == "career_years") c.analysis.split.mode = SplitPoint::Mode::career_years;
      else if (*m == "paper_count") c.analysis.split.mode = SplitPoint::Mode::paper_count;
      else s.fail("mode", "must be career_years or paper_count");
    }
    s.get("value", c.analysis.split.value);
    if (auto v = s.optional<int>("min_past")) c.analysis.split.min_past = *v;
    s.get("min_future", c.analysis.split.min_future);
    s.finish();
  }
  {
    auto s = section("impact");
    if (auto k = s.optional<std::string>("kind")) {
      try {
        c.analysis.impact = parse_impact_kind(*k);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("impact.kind: ") + e.what());
      }
    }
    s.finish();
  }
  {
    auto s = section("group");
    s.get("quantile", c.analysis.quantile);
    s.finish();
  }
  {
    auto s = section("covariates");
    s.get("enabled", c.analysis.covariates.enabled);
    if (auto v = s.list<std::string>("ivy_institutions")) c.analysis.covariates.ivy_institutions = *v;
    s.get("importation_lookback", c.analysis.covariates.importation_lookback);
    s.finish();
  }
  {
    auto s = section("regress");
    if (auto v = s.list<std::string>("models")) {
      c.regressions.clear();
      for (const auto& m : *v) {
        try {
          c.regressions.push_back(stats::parse_model_spec(m));
        } catch (const std::exception& e) {
          throw ConfigError(std::string("regress.models: ") + e.what());
        }
      }
    }
    if (auto v = s.list<std::string>("extra_numeric")) c.extras.numeric = *v;
    if (auto v = s.list<std::string>("extra_categorical")) c.extras.categorical = *v;
    s.get("bootstrap", c.bootstrap);
    s.finish();
  }
  {
    auto s = section("analyses");
    s.get("psm", c.run_psm);
    s.get("psw", c.run_psw);
    s.get("null", c.run_null);
    s.get("mediation", c.run_mediation);
    s.get("cohorts", c.run_cohorts);
    s.get("transitions", c.run_transitions);
    s.get("stability", c.run_stability);
    s.get("drastic", c.run_drastic);
    s.get("trajectories", c.run_trajectories);
    if (auto v = s.optional<bool>("regressions"); v && !*v) c.regressions.clear();
    s.finish();
  }
  {
    auto s = section("psm");
    if (auto t = s.optional<std::string>("treat_on")) c.psm.treat_on = treat_on(*t);
    s.get("treated_group", c.psm.treated_group);
    s.get("control_group", c.psm.control_group);
    s.get("caliper_sd", c.psm.caliper_sd);
    s.finish();
  }
  {
    auto s = section("psw");
    if (auto m = s.optional<std::string>("method")) {
      try {
        c.psw.method = causal::parse_propensity_method(*m);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("psw.method: ") + e.what());
      }
    }
    s.get("baseline", c.psw.baseline);
    s.get("treated", c.psw.treated);
    s.get("trim_percentile", c.psw.trim_percentile);
    s.get("trees", c.psw.trees);
    s.get("shrinkage", c.psw.shrinkage);
    s.finish();
  }
  {
    auto s = section("null");
    s.get("replicates", c.null_models.replicates);
    s.get("swaps_per_edge", c.null_models.swaps_per_edge);
    s.get("author", c.null_models.author);
    s.get("paper", c.null_models.paper);
    s.finish();
  }
  {
    auto s = section("mediation");
    s.get("treatment", c.mediation.treatment);
    s.get("mediator", c.mediation.mediator);
    s.get("outcome", c.mediation.outcome);
    if (auto v = s.list<std::string>("controls")) c.mediation.controls.numeric = *v;
    if (auto v = s.list<std::string>("categorical_controls")) {
      c.mediation.controls.categorical.clear();
      for (const auto& n : *v) c.mediation.controls.categorical.push_back({n, std::nullopt});
    }
    s.get("bootstrap", c.mediation.bootstrap);
    s.get("min_cases", c.mediation.min_cases);
    s.finish();
  }
  {
    auto s = section("cohorts");
    if (const auto* arr = s.array("ranges")) {
      c.cohorts.clear();
      for (const auto& el : *arr) {
        const auto* pair = el.as_array();
        if (!pair || pair->size() != 2 || !(*pair)[0].value<int>() || !(*pair)[1].value<int>()) {
          s.fail("ranges", "must hold [first_year, last_year] pairs");
        }
        c.cohorts.push_back({*(*pair)[0].value<int>(), *(*pair)[1].value<int>()});
      }
    }
    s.get("horizon", c.cohort_horizon);
    s.finish();
  }
  {
    auto s = section("transitions");
    if (auto v = s.list<std::string>("snapshots")) {
      c.snapshots.clear();
      for (const auto& d : *v) c.snapshots.push_back(parse_date(d, "transitions.snapshots"));
    }
    s.finish();
  }
  {
    auto s = section("trajectories");
    s.get("max_year", c.trajectory_years);
    s.finish();
  }
  {
    auto s = section("stability");
    if (const auto* arr = s.array("periods")) {
      for (const auto& el : *arr) {
        const auto* pair = el.as_array();
        if (!pair || pair->size() != 2 || !(*pair)[0].value<std::string>() || !(*pair)[1].value<std::string>()) {
          s.fail("periods", "must hold [from, to] date pairs");
        }
        c.periods.emplace_back(parse_date(*(*pair)[0].value<std::string>(), "stability.periods"),
                               parse_date(*(*pair)[1].value<std::string>(), "stability.periods"));
      }
    }
    s.finish();
  }
  {
    auto s = section("drastic");
    s.get("split", c.drastic_split);
    s.finish();
  }
  {
    auto s = section("sweep");
    c.sweep.splits = range_list(s, "splits", c.sweep.splits);
    c.sweep.window_j = range_list(s, "window_j", c.sweep.window_j);
    c.sweep.window_k = range_list(s, "window_k", c.sweep.window_k);
    if (auto v = s.list<double>("quantiles")) c.sweep.quantiles = *v;
    if (auto v = s.list<std::string>("digits")) {
      c.sweep.digits.clear();
      for (const auto& d : *v) {
        const auto dash = d.find('-');
        try {
          if (dash == std::string::npos) throw std::invalid_argument(d);
          c.sweep.digits.emplace_back(std::stoi(d.substr(0, dash)), std::stoi(d.substr(dash + 1)));
        } catch (const std::exception&) {
          s.fail("digits", "entries must look like \"2-4\"");
        }
      }
    }
    if (auto m = s.optional<std::string>("model")) {
      try {
        c.sweep.model = stats::parse_model_spec(*m);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("sweep.model: ") + e.what());
      }
    }
    if (auto v = s.list<std::string>("dimensions")) c.sweep.dimensions = *v;
    s.finish();
  }
  {
    auto s = section("synth");
    if (auto p = s.optional<std::string>("preset")) {
      c.synth_preset = *p;
    }
    try {
      c.synth = synth_preset(c.synth_preset);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    read_synth(s, c.synth);
    s.finish();
  }
  {
    auto s = section("run");
    s.get("seed", c.seed);
    if (auto o = s.optional<std::string>("out")) c.out = resolve(base_dir, *o);
    s.finish();
  }
  c.mediation.seed = c.seed;
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

void RunConfig::validate() const {
  auto check = [](auto&& fn) {
    try {
      fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  };
  check([&] { analysis.scheme.validate(); });
  check([&] { analysis.window.validate(); });
  check([&] { analysis.split.validate(); });
  check([&] { synth.validate(); });
  if (filter.min_papers < 1) throw ConfigError("corpus.min_papers must be positive");
  if (!(analysis.quantile > 0.0 && analysis.quantile <= 50.0)) throw ConfigError("group.quantile must lie in (0, 50]");
  if (analysis.metric == DistanceMetric::directed_overlap && analysis.graph != GraphKind::citation) {
    throw ConfigError("graph.metric directed_overlap requires graph.kind citation");
  }
  if (bootstrap < 0) throw ConfigError("regress.bootstrap must be non-negative");
  if (psm.caliper_sd <= 0.0) throw ConfigError("psm.caliper_sd must be positive");
  if (null_models.replicates < 1) throw ConfigError("null.replicates must be positive");
  if (null_models.swaps_per_edge < 0) throw ConfigError("null.swaps_per_edge must be non-negative");
  if (run_null && !null_models.author && !null_models.paper) throw ConfigError("null analysis enabled with no shuffle kind");
  for (auto m : regressions) {
    if ((m == stats::ModelSpec::S9 || m == stats::ModelSpec::S10 || m == stats::ModelSpec::S11) &&
        extras.numeric.empty() && extras.categorical.empty()) {
      throw ConfigError(std::string("regression ") + stats::to_string(m) + " needs regress.extra_numeric or extra_categorical");
    }
  }
  auto needs_covariate = [&](const std::string& name, const char* who) {
    const bool derived = name.rfind("ext_", 0) == 0 || name.find("_past") != std::string::npos ||
                         name.find("_future") != std::string::npos;
    static const std::set<std::string> base = {"ep_past", "ed_past", "ep_future", "ed_future", "logcit_past",
                                               "logcit_future", "p_past", "p_future"};
    if (derived && !base.count(name) && !analysis.covariates.enabled) {
      throw ConfigError(std::string(who) + " uses covariate '" + name + "' but covariates.enabled is false");
    }
  };
  for (const auto& n : extras.numeric) needs_covariate(n, "regress.extra_numeric");
  if (run_mediation) {
    if (mediation.treatment.empty() || mediation.mediator.empty() || mediation.outcome.empty()) {
      throw ConfigError("mediation needs treatment, mediator and outcome");
    }
    needs_covariate(mediation.treatment, "mediation.treatment");
    needs_covariate(mediation.mediator, "mediation.mediator");
  }
  if (run_cohorts && cohorts.size() < 2) throw ConfigError("cohorts analysis needs at least two cohorts.ranges");
  if (run_transitions && snapshots.size() < 2) throw ConfigError("transitions analysis needs at least two snapshots");
  if (run_stability && periods.size() < 2) throw ConfigError("stability analysis needs at least two periods");
  if (run_trajectories && trajectory_years < 1) throw ConfigError("trajectories.max_year must be positive");
  if (run_drastic && drastic_split < 1) throw ConfigError("drastic.split must be positive");
  for (auto [a, t] : sweep.digits) {
    if (a < 1 || t < a) throw ConfigError("sweep.digits entries need 1 <= area digits <= topic digits");
  }
  for (const auto& d : sweep.dimensions) {
    if (d != "split" && d != "window" && d != "quantile" && d != "digits") {
      throw ConfigError("sweep.dimensions entries must be split, window, quantile or digits");
    }
  }
  for (int v : sweep.splits) {
    if (v < 1) throw ConfigError("sweep.splits must be positive");
  }
  for (double q : sweep.quantiles) {
    if (!(q > 0.0 && q <= 50.0)) throw ConfigError("sweep.quantiles must lie in (0, 50]");
  }
}

std::string canonical_json(const RunConfig& c) {
  ordered_json j;
  j["corpus"] = {{"path", c.corpus ? c.corpus->filename().string() : ""},
                 {"attributes", c.attributes ? c.attributes->filename().string() : ""},
                 {"min_papers", c.filter.min_papers},
                 {"from", c.filter.from ? c.filter.from->to_string() : ""},
                 {"to", c.filter.to ? c.filter.to->to_string() : ""},
                 {"missing", c.filter.policy == MissingFieldPolicy::drop_paper ? "drop_paper" : "drop_author"}};
  const auto& a = c.analysis;
  j["codes"] = {{"area_digits", a.scheme.area_prefix_len},
                {"topic_digits", a.scheme.topic_prefix_len ? *a.scheme.topic_prefix_len : 0},
                {"separators", a.scheme.separators}};
  j["graph"] = {{"kind", to_string(a.graph)}, {"metric", to_string(a.metric)}};
  j["window"] = {{"mode", window_mode_name(a.window.mode)}, {"j", a.window.j}, {"k", a.window.k}};
  j["distance"] = {{"mode", a.mode == DistanceMode::mean ? "mean" : "hausdorff"}};
  j["split"] = {{"mode", a.split.mode == SplitPoint::Mode::career_years ? "career_years" : "paper_count"},
                {"value", a.split.value},
                {"min_past", a.split.effective_min_past()},
                {"min_future", a.split.min_future}};
  j["impact"] = {{"kind", to_string(a.impact)}};
  j["group"] = {{"quantile", a.quantile}};
  j["covariates"] = {{"enabled", a.covariates.enabled},
                     {"ivy_institutions", a.covariates.ivy_institutions},
                     {"importation_lookback", a.covariates.importation_lookback}};
  ordered_json models = ordered_json::array();
  for (auto m : c.regressions) models.push_back(stats::to_string(m));
  j["regress"] = {{"models", models},
                  {"extra_numeric", c.extras.numeric},
                  {"extra_categorical", c.extras.categorical},
                  {"bootstrap", c.bootstrap}};
  j["analyses"] = {{"psm", c.run_psm},         {"psw", c.run_psw},
                   {"null", c.run_null},       {"mediation", c.run_mediation},
                   {"cohorts", c.run_cohorts}, {"transitions", c.run_transitions},
                   {"stability", c.run_stability}, {"drastic", c.run_drastic},
                   {"trajectories", c.run_trajectories}};
  j["psm"] = {{"treat_on", treat_on_name(c.psm.treat_on)},
              {"treated_group", c.psm.treated_group},
              {"control_group", c.psm.control_group},
              {"caliper_sd", c.psm.caliper_sd}};
  j["psw"] = {{"method", causal::to_string(c.psw.method)}, {"baseline", c.psw.baseline},
              {"treated", c.psw.treated},                  {"trim_percentile", c.psw.trim_percentile},
              {"trees", c.psw.trees},                      {"shrinkage", c.psw.shrinkage}};
  j["null"] = {{"replicates", c.null_models.replicates},
               {"swaps_per_edge", c.null_models.swaps_per_edge},
               {"author", c.null_models.author},
               {"paper", c.null_models.paper}};
  j["mediation"] = {{"treatment", c.mediation.treatment},
                    {"mediator", c.mediation.mediator},
                    {"outcome", c.mediation.outcome},
                    {"controls", design_json(c.mediation.controls)},
                    {"bootstrap", c.mediation.bootstrap},
                    {"min_cases", c.mediation.min_cases}};
  ordered_json cohorts = ordered_json::array();
  for (const auto& k : c.cohorts) cohorts.push_back({k.first_year_from, k.first_year_to});
  j["cohorts"] = {{"ranges", cohorts}, {"horizon", c.cohort_horizon}};
  ordered_json snaps = ordered_json::array();
  for (const auto& d : c.snapshots) snaps.push_back(d.to_string());
  j["transitions"] = {{"snapshots", snaps}};
  j["trajectories"] = {{"max_year", c.trajectory_years}};
  ordered_json periods = ordered_json::array();
  for (const auto& [f, t] : c.periods) periods.push_back({f.to_string(), t.to_string()});
  j["stability"] = {{"periods", periods}};
  j["drastic"] = {{"split", c.drastic_split}};
  ordered_json digits = ordered_json::array();
  for (auto [ad, td] : c.sweep.digits) digits.push_back(std::to_string(ad) + "-" + std::to_string(td));
  j["sweep"] = {{"splits", c.sweep.splits},       {"window_j", c.sweep.window_j},
                {"window_k", c.sweep.window_k},   {"quantiles", c.sweep.quantiles},
                {"digits", digits},               {"model", stats::to_string(c.sweep.model)},
                {"dimensions", c.sweep.dimensions}};
  j["synth"] = synth_json(c.synth);
  j["synth"]["preset"] = c.synth_preset;
  j["run"] = {{"seed", c.seed}};
  return j.dump(2);
}

}  // namespace scout::app
