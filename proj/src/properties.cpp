#include "mimosa/properties.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mimosa/chem_rules.hpp"
#include "mimosa/smiles.hpp"

namespace mimosa {

ContributionTable ContributionTable::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open contribution table: " + path);
  ContributionTable t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key<TAB>value");
    t.values_[line.substr(0, tab)] = std::stod(line.substr(tab + 1));
  }
  return t;
}

ContributionTable ContributionTable::from_pairs(
    const std::vector<std::pair<std::string, double>>& pairs) {
  ContributionTable t;
  for (const auto& [k, v] : pairs) t.values_[k] = v;
  return t;
}

double ContributionTable::contribution(const std::string& label) const {
  auto it = values_.find(label);
  if (it == values_.end())
    throw std::runtime_error("no contribution entry for label: " + label);
  return it->second;
}

double logp_surrogate(const MolGraph& g, const ContributionTable& table,
                      const SubstructureVocab& vocab) {
  double total = 0.0;
  for (int v = 0; v < g.node_count(); ++v)
    total += table.contribution(vocab.entry(g.label(v)).label);
  return total;
}

int long_cycle_count(const MolGraph& g, const SubstructureVocab& vocab) {
  AtomGraph a = expand_to_atoms(g, vocab);
  auto rings = perceive_rings(a);
  int count = 0;
  for (const auto& cycle : rings.cycles)
    if (cycle.size() > 6) ++count;
  return count;
}

namespace {

int ring_node_count(const MolGraph& g, const SubstructureVocab& vocab) {
  int count = 0;
  for (int v = 0; v < g.node_count(); ++v)
    if (vocab.entry(g.label(v)).is_ring()) ++count;
  return count;
}

// trapezoid desirability: 0 below a, ramp to 1 on [a,b], 1 on [b,c], ramp
// down on [c,d], 0 above
double desirability(double x, double a, double b, double c, double d) {
  if (x <= a || x >= d) return 0.0;
  if (x < b) return (x - a) / (b - a);
  if (x <= c) return 1.0;
  return (d - x) / (d - c);
}

}  // namespace

double plogp_surrogate(const MolGraph& g, const ContributionTable& table,
                       const SubstructureVocab& vocab, const PlogpConfig& cfg) {
  const double sa = cfg.node_cost * g.node_count() +
                    cfg.ring_cost * ring_node_count(g, vocab);
  return logp_surrogate(g, table, vocab) - sa - long_cycle_count(g, vocab);
}

double druglike_surrogate(const MolGraph& g, const ContributionTable& table,
                          const SubstructureVocab& vocab) {
  const double d_size = desirability(g.node_count(), 1.0, 3.0, 10.0, 18.0);
  const double d_logp = desirability(logp_surrogate(g, table, vocab), -3.0, -0.5, 3.0, 6.0);
  const double d_ring = desirability(ring_node_count(g, vocab), -1.0, 0.0, 2.0, 4.0);
  return d_size * d_logp * d_ring;
}

PropertyScorer external_table_scorer(const std::string& path,
                                     std::shared_ptr<const SubstructureVocab> vocab,
                                     double default_penalty) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open score table: " + path);
  auto table = std::make_shared<std::unordered_map<std::string, double>>();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key<TAB>score");
    const std::string key = line.substr(0, tab);
    const double score = std::stod(line.substr(tab + 1));
    (*table)[key] = score;
    try {
      (*table)[ordering_key(parse_smiles(key, *vocab))] = score;
    } catch (const ParseError&) {
      // raw key only (already a canonical key, or not a molecule)
    }
  }
  PropertyScorer s;
  s.name = "table:" + path;
  s.score = [table, vocab, default_penalty](const MolGraph& g) {
    auto it = table->find(ordering_key(g));
    return it == table->end() ? default_penalty : it->second;
  };
  return s;
}

TargetDistConfig make_target(std::shared_ptr<const SubstructureVocab> vocab,
                             MolGraph input, std::vector<double> eta,
                             std::vector<PropertyScorer> scorers, int fp_radius,
                             int fp_width) {
  if (eta.empty()) throw std::invalid_argument("eta must contain at least eta_0");
  if (eta.size() != scorers.size() + 1)
    throw std::invalid_argument("eta length must be scorer count + 1");
  for (double e : eta)
    if (!(e >= 0.0)) throw std::invalid_argument("eta weights must be nonnegative");
  TargetDistConfig cfg;
  cfg.vocab = std::move(vocab);
  cfg.input = std::move(input);
  cfg.eta = std::move(eta);
  cfg.scorers = std::move(scorers);
  cfg.fp_radius = fp_radius;
  cfg.fp_width = fp_width;
  if (!is_valid(cfg.input, *cfg.vocab))
    throw std::invalid_argument("target input molecule is not valid");
  cfg.input_fp = fingerprint(cfg.input, fp_radius, fp_width);
  for (const auto& s : cfg.scorers) cfg.input_scores.push_back(s.score(cfg.input));
  return cfg;
}

double log_target_density(const TargetDistConfig& cfg, const MolGraph& y) {
  if (!check_validity(y, *cfg.vocab).valid) return kLogZero;
  double logp = cfg.eta[0] * tanimoto(cfg.input_fp,
                                      fingerprint(y, cfg.fp_radius, cfg.fp_width));
  for (std::size_t i = 0; i < cfg.scorers.size(); ++i) {
    double sy;
    try {
      sy = cfg.scorers[i].score(y);
    } catch (const std::exception& e) {
      throw std::runtime_error("property scorer '" + cfg.scorers[i].name +
                               "' failed: " + e.what());
    }
    logp += cfg.eta[i + 1] * (sy - cfg.input_scores[i]);
  }
  return logp;
}

}  // namespace mimosa
