#include "mimosa/config.hpp"

#include <fstream>
#include <sstream>

#include "mimosa/corpus.hpp"
#include "mimosa/rng.hpp"
#include "mimosa/smiles.hpp"

namespace mimosa {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

BondType bond_from_name(const std::string& name) {
  if (name == "single") return BondType::Single;
  if (name == "double") return BondType::Double;
  if (name == "triple") return BondType::Triple;
  if (name == "aromatic") return BondType::Aromatic;
  throw ConfigError("unknown bond type: " + name);
}

}  // namespace

Profile Profile::parse(const std::string& text, const std::string& origin) {
  Profile p;
  p.origin_ = origin;
  p.hash_ = fnv1a64(text);
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    p.sections_[section][key] = value;
  }
  return p;
}

Profile Profile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open profile: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

bool Profile::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

const std::string& Profile::get(const std::string& section,
                                const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end() || !s->second.count(key))
    throw ConfigError(origin_ + ": missing [" + section + "] " + key);
  return s->second.at(key);
}

std::string Profile::get_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

double Profile::get_double(const std::string& section, const std::string& key) const {
  try {
    return std::stod(get(section, key));
  } catch (const std::invalid_argument&) {
    throw ConfigError(origin_ + ": [" + section + "] " + key + " is not a number");
  }
}

double Profile::get_double_or(const std::string& section, const std::string& key,
                              double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

int Profile::get_int_or(const std::string& section, const std::string& key,
                        int fallback) const {
  return has(section, key) ? static_cast<int>(get_double(section, key)) : fallback;
}

std::uint64_t Profile::get_u64_or(const std::string& section, const std::string& key,
                                  std::uint64_t fallback) const {
  if (!has(section, key)) return fallback;
  try {
    return std::stoull(get(section, key));
  } catch (const std::invalid_argument&) {
    throw ConfigError(origin_ + ": [" + section + "] " + key + " is not an integer");
  }
}

std::string Profile::dir() const {
  auto slash = origin_.find_last_of('/');
  if (slash == std::string::npos) return ".";
  return origin_.substr(0, slash);
}

std::string Profile::resolve(const std::string& path) const {
  if (path.empty() || path.front() == '/') return path;
  if (path.rfind("synthetic:", 0) == 0) return path;
  return dir() + "/" + path;
}

RunProfile load_run_profile(const std::string& path) {
  RunProfile rp;
  rp.profile = Profile::load(path);
  const Profile& p = rp.profile;

  const std::string vocab_path = p.get("paths", "vocab");
  try {
    rp.vocab = std::make_shared<SubstructureVocab>(
        SubstructureVocab::load_file(p.resolve(vocab_path)));
  } catch (const std::runtime_error& e) {
    throw ConfigError(std::string("vocabulary: ") + e.what());
  }

  if (p.has("paths", "logp_table")) {
    try {
      rp.logp_table = std::make_shared<ContributionTable>(
          ContributionTable::load_file(p.resolve(p.get("paths", "logp_table"))));
    } catch (const std::runtime_error& e) {
      throw ConfigError(std::string("logp table: ") + e.what());
    }
  }
  rp.plogp.node_cost = p.get_double_or("plogp", "node_cost", 0.1);
  rp.plogp.ring_cost = p.get_double_or("plogp", "ring_cost", 0.2);

  rp.corpus_spec = p.get_or("paths", "corpus", "");
  rp.checkpoint_mgnn = p.get_or("paths", "checkpoint_mgnn", "");
  rp.checkpoint_bgnn = p.get_or("paths", "checkpoint_bgnn", "");

  // target weights and scorers
  rp.eta.push_back(p.get_double_or("target", "eta0", 1.0));
  for (int i = 1;; ++i) {
    const std::string pk = "property" + std::to_string(i);
    const std::string ek = "eta" + std::to_string(i);
    if (!p.has("target", pk)) break;
    rp.scorer_names.push_back(p.get("target", pk));
    rp.eta.push_back(p.get_double_or("target", ek, 0.3));
  }

  // kernel
  rp.kernel.gamma_replace = p.get_double_or("kernel", "gamma_replace", 0.5);
  rp.kernel.gamma_add = p.get_double_or("kernel", "gamma_add", 0.25);
  rp.kernel.gamma_delete = p.get_double_or("kernel", "gamma_delete", 0.25);
  const std::string conv = p.get_or("kernel", "convention", "textbook");
  if (conv == "textbook") {
    rp.kernel.convention = WeightConvention::TextbookMh;
  } else if (conv == "paper") {
    rp.kernel.convention = WeightConvention::Paper;
  } else {
    throw ConfigError("unknown weight convention: " + conv);
  }
  const std::string gate = p.get_or("kernel", "add_gate", "bernoulli");
  if (gate == "bernoulli") {
    rp.kernel.proposal.add_gate = AddGate::Bernoulli;
  } else if (gate == "threshold") {
    rp.kernel.proposal.add_gate = AddGate::Threshold;
  } else {
    throw ConfigError("unknown add gate: " + gate);
  }
  rp.kernel.proposal.add_threshold = p.get_double_or("kernel", "add_threshold", 0.5);
  if (p.has("kernel", "allowed_bonds")) {
    rp.kernel.proposal.allowed_bonds.clear();
    for (const auto& b : split_list(p.get("kernel", "allowed_bonds")))
      rp.kernel.proposal.allowed_bonds.push_back(bond_from_name(b));
    if (rp.kernel.proposal.allowed_bonds.empty())
      throw ConfigError("allowed_bonds must not be empty");
  }
  try {
    rp.kernel.validate(false);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  // run
  rp.run.particles = p.get_int_or("run", "particles", 20);
  rp.run.t_max = p.get_int_or("run", "t_max", 10);
  rp.run.t_burnin = p.get_int_or("run", "t_burnin", 5);
  rp.run.seed = p.get_u64_or("run", "seed", 0);
  rp.run.parallel = p.get_int_or("run", "parallel", 1) != 0;
  try {
    rp.run.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  // gnn + training
  rp.gnn.vocab_size = rp.vocab->size();
  rp.gnn.layers = p.get_int_or("gnn", "layers", 5);
  rp.gnn.hidden = p.get_int_or("gnn", "hidden", 300);
  rp.gnn.head_hidden = p.get_int_or("gnn", "head_hidden", 50);
  rp.train.batch = p.get_int_or("gnn", "batch", 256);
  rp.train.epochs = p.get_int_or("gnn", "epochs", 10);
  rp.train.lr = p.get_double_or("gnn", "lr", 1e-3);
  rp.train.seed = rp.run.seed;
  rp.train.parallel = rp.run.parallel;
  if (rp.train.batch < 1 || rp.train.lr <= 0.0)
    throw ConfigError("training needs batch >= 1 and lr > 0");

  // metrics: single-property template sim >= 0.4, multi-property sim >= 0.3
  const double default_sim = rp.scorer_names.size() > 1 ? 0.3 : 0.4;
  rp.thresholds.sim = p.get_double_or("metrics", "sim_threshold", default_sim);
  for (std::size_t i = 1; i <= rp.scorer_names.size(); ++i)
    rp.thresholds.deltas.push_back(
        p.get_double_or("metrics", "delta" + std::to_string(i), 0.3));

  // oracle
  rp.oracle_vocab_labels = split_list(p.get_or("oracle", "vocab_labels", "C,O"));
  rp.oracle_max_nodes = p.get_int_or("oracle", "max_nodes", 3);
  rp.oracle_input = p.get_or("oracle", "input", "C");
  rp.oracle_chain_steps =
      static_cast<long>(p.get_u64_or("oracle", "steps", 1000000));
  rp.oracle_stationary_tol = p.get_double_or("oracle", "stationary_tol", 1e-9);
  rp.oracle_balance_tol = p.get_double_or("oracle", "balance_tol", 1e-9);
  rp.oracle_tv_tol = p.get_double_or("oracle", "tv_tol", 0.05);
  return rp;
}

std::vector<PropertyScorer> make_scorers(const RunProfile& rp) {
  std::vector<PropertyScorer> out;
  for (const auto& name : rp.scorer_names) {
    if (name == "plogp" || name == "logp" || name == "druglike") {
      if (!rp.logp_table)
        throw ConfigError("scorer '" + name + "' needs [paths] logp_table");
      auto table = rp.logp_table;
      auto vocab = rp.vocab;
      PropertyScorer s;
      s.name = name;
      if (name == "plogp") {
        const PlogpConfig plogp = rp.plogp;
        s.score = [table, vocab, plogp](const MolGraph& g) {
          return plogp_surrogate(g, *table, *vocab, plogp);
        };
      } else if (name == "logp") {
        s.score = [table, vocab](const MolGraph& g) {
          return logp_surrogate(g, *table, *vocab);
        };
      } else {
        s.score = [table, vocab](const MolGraph& g) {
          return druglike_surrogate(g, *table, *vocab);
        };
      }
      out.push_back(std::move(s));
    } else if (name.rfind("table:", 0) == 0) {
      try {
        out.push_back(external_table_scorer(
            rp.profile.resolve(name.substr(6)), rp.vocab));
      } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
      }
    } else {
      throw ConfigError("unknown property scorer: " + name);
    }
  }
  return out;
}

TargetDistConfig make_profile_target(const RunProfile& rp, MolGraph input) {
  return make_target(rp.vocab, std::move(input), rp.eta, make_scorers(rp));
}

std::vector<MolGraph> load_profile_corpus(const RunProfile& rp) {
  if (rp.corpus_spec.empty())
    throw ConfigError(rp.profile.origin() + ": missing [paths] corpus");
  if (rp.corpus_spec.rfind("synthetic:", 0) == 0) {
    SyntheticCorpusConfig cfg;
    cfg.count = std::stoi(rp.corpus_spec.substr(10));
    cfg.seed = derive_seed(rp.run.seed, 0x636f7270);
    return synthetic_rule_corpus(cfg, *rp.vocab);
  }
  const std::string path = rp.profile.resolve(rp.corpus_spec);
  std::ifstream probe(path);
  if (!probe)
    throw ConfigError("corpus file does not exist: " + path);
  try {
    return load_corpus_graphs(path, *rp.vocab);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace mimosa
