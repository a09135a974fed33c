#include "scout/app/commands.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "scout/causal/drastic.hpp"
#include "scout/causal/null_models.hpp"
#include "scout/causal/psm.hpp"
#include "scout/causal/psw.hpp"
#include "scout/format.hpp"
#include "scout/stats/bootstrap.hpp"
#include "scout/stats/descriptive.hpp"
#include "scout/stats/mediation.hpp"
#include "scout/stats/models.hpp"
#include "scout/synthetic.hpp"
#include "scout/temporal.hpp"

namespace scout::app {

namespace {

using nlohmann::ordered_json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Seed of a named sub-stream of the master seed (FNV-1a of the label).
std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return mix_seed(master ^ mix_seed(h));
}

ordered_json num(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

std::string csv_row(std::initializer_list<std::string> fields) {
  std::string line;
  bool first = true;
  for (const auto& f : fields) {
    if (!first) line += ',';
    line += csv_field(f);
    first = false;
  }
  return line + "\n";
}

std::string d(double v) { return fmt_double(v); }
std::string u(std::size_t v) { return std::to_string(v); }

causal::PswSpec psw_spec(const RunConfig& c, std::uint64_t seed) {
  causal::PswSpec s;
  s.baseline = c.psw.baseline;
  s.treated = c.psw.treated;
  s.method = c.psw.method;
  s.trim_percentile = c.psw.trim_percentile;
  s.trees = c.psw.trees;
  s.shrinkage = c.psw.shrinkage;
  s.seed = seed;
  return s;
}

std::string effects_csv(const causal::PswResult& r) {
  std::string out = "estimand,group,baseline,n,baseline_n,estimate,se,ci_low,ci_high,p,percent\n";
  const char* est = r.estimand == causal::Estimand::ate ? "ATE" : "ATT";
  for (const auto& e : r.effects) {
    out += csv_row({est, e.group, r.baseline, u(e.n), u(r.baseline_n), d(e.estimate), d(e.se), d(e.ci_low),
                    d(e.ci_high), d(e.p), d(e.percent)});
  }
  return out;
}

std::string regression_csv(const stats::RegressionResult& r, const std::vector<double>& standardized,
                           const stats::CoefficientBootstrap* boot, double sd_outcome) {
  std::string out = "term,coef,se,t,p,stars,ci_low,ci_high,boot_low,boot_high,std_coef,e_value,n,k,r2\n";
  for (std::size_t i = 0; i < r.coef.size(); ++i) {
    const auto [lo, hi] = r.ci(i);
    double ev = kNaN;
    if (r.names[i] != "(intercept)" && sd_outcome > 0.0) ev = stats::e_value(r.coef[i], sd_outcome);
    out += csv_row({r.names[i], d(r.coef[i]), d(r.se[i]), d(r.t[i]), d(r.p[i]), stats::stars(r.p[i]), d(lo), d(hi),
                    boot ? d(boot->ci_low[i]) : "", boot ? d(boot->ci_high[i]) : "",
                    i < standardized.size() ? d(standardized[i]) : "", d(ev), u(r.n), u(r.k), d(r.r2)});
  }
  return out;
}

struct MetricFit {
  stats::RegressionResult fit;
  std::optional<stats::CoefficientBootstrap> boot;
};

/// Fit of `spec` on rows; bootstrap when `replicates` > 0.
MetricFit fit_rows(const std::vector<AuthorAnalysisRow>& rows, stats::ModelSpec spec, const stats::ModelExtras& extras,
                   int replicates, std::uint64_t seed) {
  const auto frame = to_frame(rows);
  MetricFit m{stats::run_model(frame, spec, extras), std::nullopt};
  if (replicates > 0) {
    m.boot = stats::bootstrap_model(frame, spec, extras, m.fit, static_cast<std::size_t>(replicates), seed);
  }
  return m;
}

std::string sweep_header(const std::string& key) {
  return key + ",n,ep_coef,ep_se,ep_p,ep_boot_low,ep_boot_high,ed_coef,ed_se,ed_p,ed_boot_low,ed_boot_high,r2\n";
}

std::string sweep_line(const std::string& key, const MetricFit& m) {
  const auto& f = m.fit;
  auto term = [&](const char* name) -> std::array<std::string, 5> {
    const auto i = f.index(name);
    if (!i) return {"", "", "", "", ""};
    return {d(f.coef[*i]), d(f.se[*i]), d(f.p[*i]), m.boot ? d(m.boot->ci_low[*i]) : "",
            m.boot ? d(m.boot->ci_high[*i]) : ""};
  };
  const auto ep = term("ep_past");
  const auto ed = term("ed_past");
  std::string line = key + "," + u(f.n);
  for (const auto& s : ep) line += "," + s;
  for (const auto& s : ed) line += "," + s;
  return line + "," + d(f.r2) + "\n";
}

std::string group_name(std::size_t g) {
  static const char* names[] = {"A", "B", "C", "D", "excluded"};
  return names[g];
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const CorpusError*>(&e) ||
      dynamic_cast<const MissingArtifactError*>(&e)) {
    return kValidationFailure;
  }
  return kAnalysisError;
}

SweepDimension parse_sweep_dimension(const std::string& s) {
  if (s == "split") return SweepDimension::split;
  if (s == "window") return SweepDimension::window;
  if (s == "quantile") return SweepDimension::quantile;
  if (s == "digits") return SweepDimension::digits;
  throw ConfigError("unknown sweep dimension '" + s + "' (split, window, quantile, digits)");
}

const char* to_string(SweepDimension d) {
  switch (d) {
    case SweepDimension::split: return "split";
    case SweepDimension::window: return "window";
    case SweepDimension::quantile: return "quantile";
    case SweepDimension::digits: return "digits";
  }
  return "";
}

Session::Session(RunConfig config, std::string command, std::ostream& log)
    : config_(std::move(config)),
      command_(std::move(command)),
      log_(log),
      manifest_(command_, canonical_json(config_), config_.seed) {}

Session::~Session() = default;

void Session::emit(const std::string& stage, const std::string& name, const std::string& content) {
  std::filesystem::create_directories(config_.out);
  const auto path = config_.out / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.close();
  if (!out) throw std::runtime_error("cannot write " + path.string());
  manifest_.stage(stage).outputs.emplace_back(name, sha256_hex(content));
}

std::filesystem::path Session::finish() { return manifest_.write(config_.out); }

void Session::record_corpus_inputs(StageRecord& stage) {
  (void)corpus();
  stage.inputs.emplace_back("corpus", corpus_digest_);
  if (!attributes_digest_.empty()) stage.inputs.emplace_back("attributes", attributes_digest_);
  stage.inputs.emplace_back("config", manifest_.config_hash());
}

const Corpus& Session::corpus() {
  if (corpus_) return *corpus_;
  const auto path = config_.corpus_path();
  if (!std::filesystem::exists(path)) {
    throw MissingArtifactError("corpus " + path.string() +
                               " not found; it is produced by `scout synth` (or set corpus.path in the config)");
  }
  log_ << "loading " << path.string() << "\n";
  auto loaded = load_corpus(path, config_.filter);
  corpus_digest_ = sha256_file(path);
  const auto attr_path = config_.attributes_path();
  if (std::filesystem::exists(attr_path)) {
    loaded = with_attributes(std::move(loaded), load_author_attributes(attr_path));
    attributes_digest_ = sha256_file(attr_path);
  } else if (config_.attributes) {
    throw MissingArtifactError("attributes file " + attr_path.string() + " not found");
  }
  for (const auto& [kind, n] : loaded.report().warnings) manifest_.warn("corpus: " + kind + " x" + std::to_string(n));
  corpus_ = std::make_unique<Corpus>(std::move(loaded));
  return *corpus_;
}

const Workspace& Session::workspace() {
  if (!workspace_) workspace_ = std::make_unique<Workspace>(corpus(), config_.analysis);
  return *workspace_;
}

const RowSet& Session::rows() {
  if (!rows_) {
    rows_ = std::make_unique<RowSet>(workspace().rows());
    if (rows_->rows.empty()) throw stats::StatsError("no author is eligible at split " + config_.analysis.split.label());
  }
  return *rows_;
}

const stats::Frame& Session::frame() {
  if (!frame_) frame_ = std::make_unique<stats::Frame>(to_frame(rows().rows));
  return *frame_;
}

void Session::validate(const std::optional<std::filesystem::path>& corpus_path) {
  if (corpus_path) config_.corpus = *corpus_path;
  auto& stage = manifest_.stage("validate");
  record_corpus_inputs(stage);
  const auto& report = corpus().report();
  emit("validate", "validation.json", report.to_json() + "\n");
  log_ << "validated " << report.papers << " papers, " << report.authors_eligible << " eligible authors\n";
}

void Session::synth() {
  auto& stage = manifest_.stage("synth");
  stage.inputs.emplace_back("config", manifest_.config_hash());
  log_ << "generating synthetic corpus (" << config_.synth.authors << " authors)\n";
  const auto result = generate_corpus(config_.synth, config_.seed);
  std::ostringstream corpus_out, attrs_out, authors_out;
  write_corpus(corpus_out, result.corpus);
  write_attributes(attrs_out, result.attributes);
  write_synth_authors_csv(authors_out, result);
  emit("synth", "corpus.jsonl", corpus_out.str());
  emit("synth", "attributes.jsonl", attrs_out.str());
  emit("synth", "synth_authors.csv", authors_out.str());
  emit("synth", "synth.json", result.manifest_json() + "\n");
  if (result.citation_shortfall > 0) {
    manifest_.warn("synth: " + std::to_string(result.citation_shortfall) + " citations could not be placed");
  }
  corpus_.reset();
  workspace_.reset();
  rows_.reset();
  frame_.reset();
}

void Session::graph() {
  auto& stage = manifest_.stage("graph");
  record_corpus_inputs(stage);
  const auto& ws = workspace();
  std::ostringstream edges, strengths;
  write_edges_csv(edges, ws.graph());
  write_strengths_csv(strengths, ws.graph());
  emit("graph", "graph_edges.csv", edges.str());
  emit("graph", "graph_strengths.csv", strengths.str());
  log_ << "graph: " << ws.graph().node_count() << " topics, " << ws.graph().edge_count() << " edges\n";
}

void Session::metrics() {
  auto& stage = manifest_.stage("metrics");
  record_corpus_inputs(stage);
  const auto& rs = rows();
  std::ostringstream csv;
  write_rows_csv(csv, rs.rows);
  emit("metrics", "analysis.csv", csv.str());

  std::vector<AuthorAnalysisRow> copy = rs.rows;
  const auto info = assign_groups(copy, config_.analysis.quantile);
  ordered_json j;
  j["split"] = config_.analysis.split.label();
  j["window"] = config_.analysis.window.label();
  j["careers"] = rs.careers;
  j["rows"] = rs.rows.size();
  j["split_excluded"] = rs.split_excluded;
  j["metric_undefined"] = rs.metric_undefined;
  j["quantile"] = config_.analysis.quantile;
  j["thresholds"] = {{"ep_high", num(info.ep_high)},
                     {"ep_low", num(info.ep_low)},
                     {"ed_high", num(info.ed_high)},
                     {"ed_low", num(info.ed_low)}};
  j["degenerate"] = {{"ep", info.degenerate_ep}, {"ed", info.degenerate_ed}};
  ordered_json counts = ordered_json::object();
  for (std::size_t g = 0; g < info.counts.size(); ++g) counts[group_name(g)] = info.counts[g];
  j["groups"] = counts;
  emit("metrics", "groups.json", j.dump(2) + "\n");
  if (info.degenerate_ep || info.degenerate_ed) manifest_.warn("metrics: degenerate group thresholds");
  log_ << "metrics: " << rs.rows.size() << " authors at split " << config_.analysis.split.label() << "\n";
}

void Session::regress() {
  auto& stage = manifest_.stage("regress");
  record_corpus_inputs(stage);
  const auto& f = frame();
  for (auto spec : config_.regressions) {
    const auto md = stats::model_design(spec, config_.extras);
    const std::string required[] = {md.response};
    const auto design = stats::build_design(f, md.design, required);
    const auto y = stats::design_response(f, md.response, design);
    const auto fit = stats::ols_fit(design, y);
    std::vector<double> standardized;
    try {
      standardized = stats::standardized_coefs(fit, design, y);
    } catch (const stats::StatsError& e) {
      manifest_.warn(std::string("regress ") + stats::to_string(spec) + ": no standardized coefficients (" +
                     e.what() + ")");
    }
    std::optional<stats::CoefficientBootstrap> boot;
    if (config_.bootstrap > 0) {
      boot = stats::bootstrap_model(f, spec, config_.extras, fit, static_cast<std::size_t>(config_.bootstrap),
                                    derive_seed(config_.seed, std::string("regress/") + stats::to_string(spec)));
      if (boot->failed > 0) {
        manifest_.warn(std::string("regress ") + stats::to_string(spec) + ": " + std::to_string(boot->failed) +
                       " bootstrap replicates failed");
      }
    }
    std::vector<double> yv(y.data(), y.data() + y.size());
    const double sd_y = yv.size() > 1 ? stats::sample_sd(yv) : kNaN;
    emit("regress", std::string("regression_") + stats::to_string(spec) + ".csv",
         regression_csv(fit, standardized, boot ? &*boot : nullptr, sd_y));
    log_ << "regress " << stats::to_string(spec) << ": n=" << fit.n << " r2=" << fit.r2 << "\n";
  }
}

void Session::psm() {
  auto& stage = manifest_.stage("psm");
  record_corpus_inputs(stage);
  const auto& f = frame();
  causal::PsmSpec spec;
  spec.treat_on = config_.psm.treat_on;
  spec.treated_group = config_.psm.treated_group;
  spec.control_group = config_.psm.control_group;
  spec.caliper_sd = config_.psm.caliper_sd;
  spec.seed = derive_seed(config_.seed, "psm");
  const auto r = causal::psm(f, spec);
  std::ostringstream pairs;
  causal::write_pairs_csv(pairs, r, f);
  std::string balance = "covariate,smd_before,smd_after\n";
  for (const auto& b : r.match.balance) balance += csv_row({b.covariate, d(b.smd_before), d(b.smd_after)});
  ordered_json j;
  j["n_treated"] = r.n_treated;
  j["n_control"] = r.n_control;
  j["pairs"] = r.match.pairs.size();
  j["unmatched_treated"] = r.match.unmatched_treated;
  j["caliper"] = num(r.match.caliper);
  j["treated_mean"] = num(r.treated_mean);
  j["control_mean"] = num(r.control_mean);
  j["att"] = num(r.att);
  j["percent"] = num(causal::log_to_percent(r.att));
  j["p_paired_t"] = num(r.p_paired_t);
  j["p_kruskal"] = num(r.p_kruskal);
  emit("psm", "psm.json", j.dump(2) + "\n");
  emit("psm", "psm_pairs.csv", pairs.str());
  emit("psm", "psm_balance.csv", balance);
  for (const auto& w : r.warnings) manifest_.warn("psm: " + w);
  if (r.match.unmatched_treated > 0) {
    manifest_.warn("psm: " + std::to_string(r.match.unmatched_treated) + " treated authors had no match in the caliper");
  }
  log_ << "psm: " << r.match.pairs.size() << " pairs, ATT " << r.att << "\n";
}

void Session::psw() {
  auto& stage = manifest_.stage("psw");
  record_corpus_inputs(stage);
  const auto& f = frame();
  const auto spec = psw_spec(config_, derive_seed(config_.seed, "psw"));
  const auto ate = causal::psw_ate(f, spec);
  const auto att = causal::psw_att(f, spec);
  emit("psw", "psw_ate.csv", effects_csv(ate));
  emit("psw", "psw_att.csv", effects_csv(att));
  std::ostringstream w;
  causal::write_weights_csv(w, ate, f);
  emit("psw", "psw_weights.csv", w.str());
  for (const auto& w : ate.warnings) manifest_.warn("psw: " + w);
  if (ate.trimmed > 0) manifest_.warn("psw: " + std::to_string(ate.trimmed) + " ATE weights capped");
  log_ << "psw: " << spec.treated << " vs " << spec.baseline << " ATE " << ate.effect(spec.treated).estimate << "\n";
}

void Session::null_models() {
  auto& stage = manifest_.stage("null");
  record_corpus_inputs(stage);
  const auto spec = psw_spec(config_, derive_seed(config_.seed, "psw"));
  const auto observed = causal::psw_ate(frame(), spec).effect(spec.treated).estimate;
  const auto reps = static_cast<std::size_t>(config_.null_models.replicates);
  ordered_json summary;
  summary["estimator"] = "psw_ate " + spec.treated + " vs " + spec.baseline;
  summary["observed"] = num(observed);
  std::string csv = "kind,replicate,estimate\n";

  auto estimate = [&](const std::vector<AuthorAnalysisRow>& rows) {
    try {
      return causal::psw_ate(to_frame(rows), spec).effect(spec.treated).estimate;
    } catch (const stats::StatsError&) {
      return kNaN;
    }
  };
  auto finish = [&](const std::string& kind, std::vector<double> est) {
    for (std::size_t r = 0; r < est.size(); ++r) csv += csv_row({kind, u(r), d(est[r])});
    const auto s = causal::summarize_null(kind, observed, std::move(est));
    summary[kind] = ordered_json::parse(s.to_json());
    if (s.failed > 0) manifest_.warn("null " + kind + ": " + std::to_string(s.failed) + " replicates failed");
    log_ << "null " << kind << ": " << s.exceed << "/" << s.replicates << " exceed observed\n";
  };

  if (config_.null_models.author) {
    std::vector<double> est(reps);
    const auto seed = derive_seed(config_.seed, "null/author");
    for (std::size_t r = 0; r < reps; ++r) {
      est[r] = estimate(causal::null_author_shuffle(rows().rows, Rng::for_replicate(seed, r).engine()()));
    }
    finish("author", std::move(est));
  }
  if (config_.null_models.paper) {
    std::vector<double> est(reps);
    const auto seed = derive_seed(config_.seed, "null/paper");
    const auto& ws = workspace();
    for (std::size_t r = 0; r < reps; ++r) {
      const auto shuffled = causal::null_paper_shuffle(corpus(), Rng::for_replicate(seed, r).engine()(),
                                                       config_.null_models.swaps_per_edge);
      const Workspace sws(shuffled.corpus, ws);
      auto rs = sws.rows();
      est[r] = rs.rows.empty() ? kNaN : estimate(rs.rows);
    }
    finish("paper", std::move(est));
  }
  emit("null", "null_summary.json", summary.dump(2) + "\n");
  emit("null", "null_estimates.csv", csv);
}

void Session::sweep(SweepDimension dim) {
  const std::string stage_name = std::string("sweep_") + to_string(dim);
  auto& stage = manifest_.stage(stage_name);
  record_corpus_inputs(stage);
  const auto& sw = config_.sweep;
  const auto& a = config_.analysis;
  const auto seed = derive_seed(config_.seed, stage_name);
  std::string out;
  switch (dim) {
    case SweepDimension::split: {
      out = sweep_header("split");
      const auto& ws = workspace();
      for (int v : sw.splits) {
        SplitPoint sp = a.split;
        sp.value = v;
        const auto rs = ws.rows(sp);
        if (rs.rows.empty()) {
          manifest_.warn(stage_name + ": no rows at split " + std::to_string(v));
          continue;
        }
        out += sweep_line(std::to_string(v), fit_rows(rs.rows, sw.model, config_.extras, config_.bootstrap,
                                                      derive_seed(seed, std::to_string(v))));
      }
      break;
    }
    case SweepDimension::window: {
      out = "mode," + sweep_header("value");
      const auto& ws = workspace();
      auto run = [&](const std::string& mode, const std::string& value, LookbackWindow w, DistanceMode dm) {
        const MetricsContext ctx(ws.corpus(), ws.index(), &ws.provider(), w, dm);
        auto rs = build_rows(ctx, ws.impact(), RowOptions{a.split, true, a.covariates});
        assign_groups(rs.rows, a.quantile);
        out += mode + "," +
               sweep_line(value, fit_rows(rs.rows, sw.model, config_.extras, 0, 0));
      };
      for (int j : sw.window_j) run("papers", std::to_string(j), LookbackWindow::papers(j), a.mode);
      for (int k : sw.window_k) run("years", std::to_string(k), LookbackWindow::years(k), a.mode);
      run("all", "", LookbackWindow::all(), a.mode);
      run("hausdorff", a.window.label(), a.window, DistanceMode::hausdorff);
      break;
    }
    case SweepDimension::quantile: {
      out = "quantile,n_A,n_B,n_C,n_D,n_excluded,ate,se,ci_low,ci_high,p,percent\n";
      const auto spec = psw_spec(config_, derive_seed(config_.seed, "psw"));
      for (double q : sw.quantiles) {
        auto rows_q = rows().rows;
        const auto info = assign_groups(rows_q, q);
        std::string line = d(q);
        for (auto c : info.counts) line += "," + u(c);
        try {
          const auto e = causal::psw_ate(to_frame(rows_q), spec).effect(spec.treated);
          line += "," + d(e.estimate) + "," + d(e.se) + "," + d(e.ci_low) + "," + d(e.ci_high) + "," + d(e.p) + "," +
                  d(e.percent);
        } catch (const stats::StatsError& err) {
          manifest_.warn(stage_name + ": quantile " + d(q) + ": " + err.what());
          line += ",,,,,,";
        }
        out += line + "\n";
      }
      break;
    }
    case SweepDimension::digits: {
      out = sweep_header("digits");
      for (auto [ad, td] : sw.digits) {
        AnalysisSettings s = a;
        s.scheme.area_prefix_len = ad;
        s.scheme.topic_prefix_len = td;
        const Workspace wsd(corpus(), s);
        const auto rs = wsd.rows();
        const std::string key = std::to_string(ad) + "-" + std::to_string(td);
        if (rs.rows.empty()) {
          manifest_.warn(stage_name + ": no rows for digits " + key);
          continue;
        }
        out += sweep_line(key, fit_rows(rs.rows, sw.model, config_.extras, 0, 0));
      }
      break;
    }
  }
  emit(stage_name, stage_name + ".csv", out);
  log_ << stage_name << " done\n";
}

void Session::report() {
  auto& stage = manifest_.stage("report");
  const auto& c = config_;
  const bool any = !c.regressions.empty() || c.run_psm || c.run_psw || c.run_mediation || c.run_cohorts ||
                   c.run_transitions || c.run_stability || c.run_drastic || c.run_trajectories;
  stage.inputs.emplace_back("config", manifest_.config_hash());
  if (!any) {
    log_ << "report: no analyses selected\n";
    return;
  }
  record_corpus_inputs(stage);
  const auto& rs = rows();
  const auto& f = frame();

  if (!c.regressions.empty()) {
    for (const char* metric : {"ep", "ed"}) {
      std::map<double, std::vector<double>> bins;
      for (const auto& r : rs.rows) {
        const double v = metric[1] == 'p' ? r.ep_past : r.ed_past;
        if (std::isnan(v) || std::isnan(r.logcit_future)) continue;
        bins[stats::round_to_multiple(v, 0.1) + 0.0].push_back(r.logcit_future);
      }
      std::string csv = "bin,n,mean,ci_low,ci_high\n";
      for (const auto& [b, vals] : bins) {
        const auto m = mean_ci(vals);
        csv += csv_row({d(b), u(m.n), d(m.mean), d(m.low), d(m.high)});
      }
      emit("report", std::string("fig2_") + metric + "_bins.csv", csv);
    }
    std::map<std::pair<double, double>, std::vector<double>> grid;
    for (const auto& r : rs.rows) {
      if (std::isnan(r.logcit_future)) continue;
      grid[{stats::round_to_multiple(r.ep_past, 0.1) + 0.0, stats::round_to_multiple(r.ed_past, 0.1) + 0.0}].push_back(
          r.logcit_future);
    }
    std::string csv = "ep_bin,ed_bin,n,mean\n";
    for (const auto& [k, vals] : grid) csv += csv_row({d(k.first), d(k.second), u(vals.size()), d(stats::mean(vals))});
    emit("report", "fig2_grid.csv", csv);

    // Marginal effects of the S4 model: other regressors held at their means.
    const auto md = stats::model_design(stats::ModelSpec::S4);
    const std::string required[] = {md.response};
    const auto design = stats::build_design(f, md.design, required);
    const auto fit = stats::ols_fit(design, stats::design_response(f, md.response, design));
    const Eigen::VectorXd means = design.x.colwise().mean();
    std::string me = "metric,value,predicted,slope\n";
    for (const char* metric : {"ep_past", "ed_past"}) {
      const std::size_t col = fit.at(metric);
      double base = 0.0;
      for (std::size_t k = 0; k < fit.coef.size(); ++k) {
        if (k != col) base += fit.coef[k] * means(static_cast<Eigen::Index>(k));
      }
      const auto xs = design.x.col(static_cast<Eigen::Index>(col));
      const double lo = std::string(metric) == "ep_past" ? 0.0 : xs.minCoeff();
      const double hi = std::string(metric) == "ep_past" ? 1.0 : xs.maxCoeff();
      for (int s = 0; s <= 20; ++s) {
        const double v = lo + (hi - lo) * s / 20.0;
        me += csv_row({metric, d(v), d(base + fit.coef[col] * v), d(fit.coef[col])});
      }
    }
    emit("report", "fig3_marginal.csv", me);
  }

  if (c.run_psm) {
    std::string csv = "treat_on,n_treated,n_control,pairs,att,percent,p_paired_t,p_kruskal\n";
    const std::pair<causal::TreatOn, const char*> arms[] = {
        {causal::TreatOn::ep, "ep"}, {causal::TreatOn::ed, "ed"}, {causal::TreatOn::group_pair, "group_pair"}};
    for (const auto& [t, name] : arms) {
      causal::PsmSpec spec;
      spec.treat_on = t;
      spec.treated_group = c.psm.treated_group;
      spec.control_group = c.psm.control_group;
      spec.caliper_sd = c.psm.caliper_sd;
      spec.seed = derive_seed(c.seed, "psm");
      try {
        const auto r = causal::psm(f, spec);
        csv += csv_row({name, u(r.n_treated), u(r.n_control), u(r.match.pairs.size()), d(r.att),
                        d(causal::log_to_percent(r.att)), d(r.p_paired_t), d(r.p_kruskal)});
      } catch (const stats::StatsError& e) {
        manifest_.warn(std::string("report psm ") + name + ": " + e.what());
      }
    }
    emit("report", "fig5a_psm.csv", csv);
  }

  if (c.run_psw) {
    const auto spec = psw_spec(c, derive_seed(c.seed, "psw"));
    emit("report", "fig5b_psw_ate.csv", effects_csv(causal::psw_ate(f, spec)));
    emit("report", "fig5c_psw_att.csv", effects_csv(causal::psw_att(f, spec)));
    std::string csv = "quantile,group,n,estimate,ci_low,ci_high,p,percent\n";
    for (double q : c.sweep.quantiles) {
      auto rows_q = rs.rows;
      assign_groups(rows_q, q);
      try {
        const auto r = causal::psw_ate(to_frame(rows_q), spec);
        for (const auto& e : r.effects) {
          csv += csv_row({d(q), e.group, u(e.n), d(e.estimate), d(e.ci_low), d(e.ci_high), d(e.p), d(e.percent)});
        }
      } catch (const stats::StatsError& e) {
        manifest_.warn("report psw quantile " + d(q) + ": " + e.what());
      }
    }
    emit("report", "fig5d_quantiles.csv", csv);
  }

  const auto& ws = workspace();
  if (c.run_trajectories) {
    const auto t = temporal_trajectories(ws.metrics(), c.trajectory_years);
    std::string csv = "year,authors,n_ep,ep_mean,ep_low,ep_high,n_ed,ed_mean,ed_low,ed_high\n";
    for (const auto& p : t.points) {
      csv += csv_row({std::to_string(p.year), u(t.authors), u(p.ep.n), d(p.ep.mean), d(p.ep.low), d(p.ep.high),
                      u(p.ed.n), d(p.ed.mean), d(p.ed.low), d(p.ed.high)});
    }
    emit("report", "fig6a_trajectories.csv", csv);
  }
  if (c.run_cohorts) {
    const auto cc = cohort_compare(ws.metrics(), c.cohorts, c.cohort_horizon);
    std::string samples = "cohort,metric,value\n";
    for (const auto& s : cc.samples) {
      for (double v : s.ep) samples += csv_row({s.cohort.label(), "ep", d(v)});
      for (double v : s.ed) samples += csv_row({s.cohort.label(), "ed", d(v)});
    }
    std::string tests = "cohort_a,cohort_b,metric,d,p\n";
    for (const auto& t : cc.tests) {
      tests += csv_row({cc.samples[t.a].cohort.label(), cc.samples[t.b].cohort.label(), t.metric, d(t.d), d(t.p)});
    }
    emit("report", "fig6b_cohorts.csv", samples);
    emit("report", "fig6b_tests.csv", tests);
  }
  if (c.run_transitions) {
    const auto gt = group_transitions(ws.metrics(), c.snapshots, c.analysis.quantile);
    std::string csv = "from,to,from_group,to_group,count\n";
    for (std::size_t t = 0; t < gt.transitions.size(); ++t) {
      for (std::size_t i = 0; i < kGroupStates; ++i) {
        for (std::size_t j = 0; j < kGroupStates; ++j) {
          csv += csv_row({gt.snapshots[t].to_string(), gt.snapshots[t + 1].to_string(), group_name(i), group_name(j),
                          u(gt.transitions[t][i][j])});
        }
      }
    }
    emit("report", "fig6c_transitions.csv", csv);
    ordered_json j;
    j["grouped_first"] = gt.grouped_first;
    j["persistent"] = gt.persistent;
    j["persistence_rate"] = num(gt.persistence_rate());
    ordered_json stay = ordered_json::array();
    for (std::size_t t = 0; t < gt.stay_rate.size(); ++t) {
      ordered_json row = {{"from", gt.snapshots[t].to_string()}, {"to", gt.snapshots[t + 1].to_string()}};
      for (std::size_t g = 0; g < 4; ++g) row[group_name(g)] = num(gt.stay_rate[t][g]);
      stay.push_back(row);
    }
    j["stay_rate"] = stay;
    emit("report", "fig6c_persistence.json", j.dump(2) + "\n");
  }
  if (c.run_stability) {
    const auto ps = period_stability(ws.corpus(), ws.index(), c.periods, c.analysis.graph, c.analysis.metric);
    std::string csv = "period,degenerate";
    for (const auto& l : ps.labels) csv += "," + csv_field(l);
    csv += "\n";
    for (std::size_t i = 0; i < ps.labels.size(); ++i) {
      csv += csv_field(ps.labels[i]) + "," + (ps.degenerate[i] ? "true" : "false");
      for (double v : ps.correlation[i]) csv += "," + d(v);
      csv += "\n";
    }
    emit("report", "stability.csv", csv);
  }
  if (c.run_mediation) {
    auto spec = c.mediation;
    spec.seed = derive_seed(c.seed, "mediation");
    const auto m = stats::mediation(f, spec);
    auto effect = [](const stats::EffectEstimate& e) {
      return ordered_json{{"estimate", num(e.estimate)},
                          {"se", num(e.se)},
                          {"ci_normal", {num(e.ci_normal.first), num(e.ci_normal.second)}},
                          {"ci_boot", {num(e.ci_boot.first), num(e.ci_boot.second)}},
                          {"p_normal", num(e.p_normal)},
                          {"p_boot", num(e.p_boot)}};
    };
    ordered_json j = {{"treatment", spec.treatment}, {"mediator", spec.mediator}, {"outcome", spec.outcome},
                      {"n", m.n},                    {"a", num(m.a)},             {"b", num(m.b)},
                      {"acme", effect(m.acme)},      {"ade", effect(m.ade)},      {"total", effect(m.total)},
                      {"replicates", m.replicates},  {"failed_replicates", m.failed_replicates},
                      {"warnings", m.warnings}};
    for (const auto& w : m.warnings) manifest_.warn("mediation: " + w);
    emit("report", "mediation.json", j.dump(2) + "\n");
  }
  if (c.run_drastic) {
    SplitPoint sp = c.analysis.split;
    sp.value = c.drastic_split;
    auto pre = ws.rows(sp).rows;
    auto post = pre;
    assign_groups(post, c.analysis.quantile, true);
    causal::DrasticSpec spec;
    spec.method = c.psw.method;
    spec.seed = derive_seed(c.seed, "drastic");
    const auto r = causal::drastic_change_analysis(pre, post, spec);
    auto dir = [](const causal::DrasticDirection& x) {
      ordered_json j = {{"from", to_string(x.from)},
                        {"to", to_string(x.to)},
                        {"origin", x.origin},
                        {"switchers", x.switchers},
                        {"stayers", x.stayers},
                        {"fraction", num(x.fraction)},
                        {"switcher_change", num(x.switcher_change)},
                        {"stayer_change", num(x.stayer_change)},
                        {"note", x.note}};
      if (x.effect) {
        j["effect"] = {{"estimate", num(x.effect->estimate)}, {"se", num(x.effect->se)},
                       {"ci_low", num(x.effect->ci_low)},     {"ci_high", num(x.effect->ci_high)},
                       {"p", num(x.effect->p)},               {"percent", num(x.effect->percent)}};
      } else {
        j["effect"] = nullptr;
      }
      return j;
    };
    ordered_json j = {{"split", sp.label()}, {"d_to_a", dir(r.d_to_a)}, {"a_to_d", dir(r.a_to_d)}};
    emit("report", "drastic.json", j.dump(2) + "\n");
  }
  log_ << "report written to " << c.out.string() << "\n";
}

void Session::run_all() {
  if (!config_.corpus) synth();
  validate();
  graph();
  metrics();
  if (!config_.regressions.empty()) regress();
  if (config_.run_psm) psm();
  if (config_.run_psw) psw();
  if (config_.run_null) null_models();
  for (const auto& dim : config_.sweep.dimensions) sweep(parse_sweep_dimension(dim));
  report();
}

}  // namespace scout::app
