#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mimosa/gnn.hpp"
#include "mimosa/properties.hpp"
#include "mimosa/sampler.hpp"

namespace mimosa {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat key-value file with [section] headers; '#' starts a comment.
class Profile {
 public:
  static Profile load(const std::string& path);
  static Profile parse(const std::string& text, const std::string& origin);

  bool has(const std::string& section, const std::string& key) const;
  const std::string& get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  int get_int_or(const std::string& section, const std::string& key,
                 int fallback) const;
  std::uint64_t get_u64_or(const std::string& section, const std::string& key,
                           std::uint64_t fallback) const;

  const std::string& origin() const { return origin_; }
  // directory of the profile file; relative paths resolve against it
  std::string dir() const;
  std::string resolve(const std::string& path) const;
  std::uint64_t content_hash() const { return hash_; }

 private:
  std::string origin_;
  std::uint64_t hash_ = 0;
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

struct MetricThresholds {
  double sim = 0.4;
  std::vector<double> deltas;  // one per property
};

// Everything a CLI run needs, loaded and validated from one profile.
struct RunProfile {
  Profile profile;
  std::shared_ptr<SubstructureVocab> vocab;
  std::shared_ptr<ContributionTable> logp_table;
  PlogpConfig plogp;

  std::vector<double> eta;                // eta_0 .. eta_M
  std::vector<std::string> scorer_names;  // length M
  KernelConfig kernel;
  RunConfig run;
  GnnConfig gnn;
  TrainConfig train;
  MetricThresholds thresholds;

  std::string corpus_spec;      // "synthetic:<n>" or a file path
  std::string checkpoint_mgnn;  // paths, possibly empty until pretrain
  std::string checkpoint_bgnn;

  // [oracle] section
  std::vector<std::string> oracle_vocab_labels;
  int oracle_max_nodes = 3;
  std::string oracle_input = "C";
  long oracle_chain_steps = 1000000;
  double oracle_stationary_tol = 1e-9;
  double oracle_balance_tol = 1e-9;
  double oracle_tv_tol = 0.05;
};

RunProfile load_run_profile(const std::string& path);

// Scorers by name: "plogp", "logp", "druglike", "table:<path>".
std::vector<PropertyScorer> make_scorers(const RunProfile& rp);

// Target distribution for optimizing one input molecule under the profile.
TargetDistConfig make_profile_target(const RunProfile& rp, MolGraph input);

// Corpus per the profile's corpus_spec.
std::vector<MolGraph> load_profile_corpus(const RunProfile& rp);

}  // namespace mimosa
