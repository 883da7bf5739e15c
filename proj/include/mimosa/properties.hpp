#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "mimosa/fingerprint.hpp"
#include "mimosa/molgraph.hpp"
#include "mimosa/vocab.hpp"

namespace mimosa {

// Pluggable property scorer (higher is better, deterministic per graph).
struct PropertyScorer {
  std::string name;
  std::function<double(const MolGraph&)> score;
};

// Per-vocab-entry additive contribution table, keyed by entry label.
class ContributionTable {
 public:
  static ContributionTable load_file(const std::string& path);
  static ContributionTable from_pairs(
      const std::vector<std::pair<std::string, double>>& pairs);

  double contribution(const std::string& label) const;  // throws if missing
  bool empty() const { return values_.empty(); }

 private:
  std::unordered_map<std::string, double> values_;
};

// Octanol/water partition surrogate: sum of per-entry contributions.
double logp_surrogate(const MolGraph& g, const ContributionTable& table,
                      const SubstructureVocab& vocab);

struct PlogpConfig {
  double node_cost = 0.1;  // c1, per node
  double ring_cost = 0.2;  // c2, per ring node
};

// Atom-level cycles of length > 6.
int long_cycle_count(const MolGraph& g, const SubstructureVocab& vocab);

// logp - synthetic-accessibility surrogate - long cycle count.
double plogp_surrogate(const MolGraph& g, const ContributionTable& table,
                       const SubstructureVocab& vocab,
                       const PlogpConfig& cfg = {});

// Drug-likeness surrogate: product of three clamped desirability ramps over
// node count, logp, and ring-node count. Not QED; labeled surrogate.
double druglike_surrogate(const MolGraph& g, const ContributionTable& table,
                          const SubstructureVocab& vocab);

// Scorer backed by a (key -> score) file for externally computed property
// values; keys are SMILES or canonical keys, unknown molecules score the
// default penalty.
PropertyScorer external_table_scorer(const std::string& path,
                                     std::shared_ptr<const SubstructureVocab> vocab,
                                     double default_penalty = -1.0);

// Target distribution p_X(Y) of the sampler, kept in log space.
struct TargetDistConfig {
  std::shared_ptr<const SubstructureVocab> vocab;
  MolGraph input;                        // X
  std::vector<double> eta;               // eta_0 .. eta_M, all >= 0
  std::vector<PropertyScorer> scorers;   // length M
  int fp_radius = 2;
  int fp_width = 2048;
  // cached at construction
  Fingerprint input_fp{2048};
  std::vector<double> input_scores;
};

TargetDistConfig make_target(std::shared_ptr<const SubstructureVocab> vocab,
                             MolGraph input, std::vector<double> eta,
                             std::vector<PropertyScorer> scorers,
                             int fp_radius = 2, int fp_width = 2048);

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// -inf if y is invalid, else eta_0*sim(X,y) + sum_i eta_i*(P_i(y)-P_i(X));
// unnormalized log density. Scorer failures propagate with the scorer name.
double log_target_density(const TargetDistConfig& cfg, const MolGraph& y);

}  // namespace mimosa
