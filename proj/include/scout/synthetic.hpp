#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "scout/analysis.hpp"
#include "scout/corpus.hpp"

namespace scout {

/// Parameters of the synthetic corpus generator.
///
/// Each generated author publishes single-area papers, optionally with
/// one-off guest co-authors. Whether a paper moves to an area outside the
/// author's recent papers follows a low-discrepancy sequence with the
/// author's exploration rate, so realized EP stays close to that rate on
/// every prefix of the career. Exploring moves go to a neighbouring area on
/// the area ring or, with the author's far-jump share, to a distant one.
/// Filler papers by short-lived authors supply citations and the cross-area
/// links of the topic graph.
///
/// Citations are drawn in a second pass, after the topic graph exists: the
/// expected log citation count of an author's paper is linear in the
/// author's EP and ED over the papers before it (measured under `window`).
struct SynthConfig {
  int authors = 5000;
  int first_year = 1980;
  int cohort_years = 20;  // first-paper years span [first_year, first_year + cohort_years)
  int career_years_min = 17;
  int career_years_max = 26;
  double rate_min = 1.5;  // papers per year
  double rate_max = 3.0;

  int areas = 24;
  int subfields = 3;
  int codes_per_subfield = 4;

  double explore_min = 0.1;
  double explore_max = 0.8;
  double far_min = 0.0;
  double far_max = 1.0;
  double explore_decay = 0.0;  // exploration rate falls linearly by this fraction over a career
  double cohort_far_shift = 0.0;  // far-jump share shift from the earliest to the latest cohort
  double flip_fraction = 0.0;     // share of authors switching to the opposite strategy
  int flip_year = 10;             // career year of the switch

  double pool_ratio = 0.6;   // filler papers per author paper
  double guest_prob = 0.5;   // chance an author paper has guest co-authors
  double external_ref_mean = 2.0;

  double base = 1.8;  // intercept of expected log citations
  double beta_ep = 0.30;
  double beta_ed = -0.25;
  double quality_sd = 0.05;    // author-level random effect
  double home_area_sd = 0.3;  // random effect of the author's first area
  double noise_sd = 0.5;    // paper-level noise
  double cohort_effect = 0.0;  // outcome shift from the earliest to the latest cohort
  double cohort_explore_shift = 0.0;  // exploration-rate shift across cohorts
  double group_effect = 0.0;  // added to group-A papers after `group_split` career years
  int group_split = 4;
  double group_quantile = 50.0;
  double mediator_a = 0.0;  // mediator = a·EP + noise, outcome += b·mediator
  double mediator_b = 0.0;
  double mediator_sd = 0.3;
  std::string mediator_name = "novelty";

  LookbackWindow window;  // window of the running metrics that drive citations

  void validate() const;
};

/// Named parameter sets used by the test suites and the CLI.
SynthConfig synth_preset(const std::string& name);

struct SynthAuthor {
  std::string id;
  int first_year = 0;
  double explore_rate = 0.0;
  double far_share = 0.0;
  double quality = 0.0;
  int home_area = 0;
  bool flipped = false;
  Group reference_group = Group::excluded;  // group at `group_split`, when planted effects use it
};

struct SynthResult {
  Corpus corpus;
  std::vector<SynthAuthor> authors;
  std::map<std::string, std::map<std::string, std::string>> attributes;
  std::size_t author_papers = 0;
  std::size_t pool_papers = 0;
  std::size_t citation_shortfall = 0;  // citations that could not be placed for lack of citing papers
  std::uint64_t seed = 0;
  SynthConfig config;

  /// Generator settings, planted values and counts.
  [[nodiscard]] std::string manifest_json() const;
};

/// Deterministic for a given (config, seed), independent of the thread count.
SynthResult generate_corpus(const SynthConfig& config, std::uint64_t seed);

/// Columns author_id, first_year, explore_rate, far_share, quality, flipped, reference_group.
void write_synth_authors_csv(std::ostream& out, const SynthResult& result);

/// Attribute sidecar lines {"author_id", "attributes"}.
void write_attributes(std::ostream& out, const std::map<std::string, std::map<std::string, std::string>>& attrs);

}  // namespace scout
