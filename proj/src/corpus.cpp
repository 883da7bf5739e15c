#include "mimosa/corpus.hpp"

#include <stdexcept>

#include "mimosa/rng.hpp"
#include "mimosa/smiles.hpp"

namespace mimosa {

std::vector<MolGraph> load_corpus_graphs(const std::string& path,
                                         const SubstructureVocab& vocab) {
  std::vector<MolGraph> out;
  for (const auto& rec : read_corpus_file(path)) {
    try {
      out.push_back(parse_smiles(rec.smiles, vocab));
    } catch (const ParseError& e) {
      throw std::runtime_error(path + ": cannot parse '" + rec.smiles +
                               "': " + e.what());
    }
  }
  if (out.empty()) throw std::runtime_error(path + ": empty corpus");
  return out;
}

namespace {

std::vector<std::vector<int>> eligible_by_degree(const SubstructureVocab& vocab,
                                                 int max_degree) {
  std::vector<std::vector<int>> elig(max_degree + 1);
  for (int d = 1; d <= max_degree; ++d)
    for (const auto& e : vocab.entries())
      if (!e.is_ring() && e.max_valence >= d) elig[d].push_back(e.id);
  return elig;
}

}  // namespace

int synthetic_rule_label(int degree, int leaf_neighbors,
                         const SubstructureVocab& vocab) {
  static constexpr int kMaxDegree = 4;
  auto elig = eligible_by_degree(vocab, kMaxDegree);
  const auto& options = elig.at(degree);
  if (options.empty())
    throw std::runtime_error("no atom entry admits degree " + std::to_string(degree));
  return options[(3 * degree + 5 * leaf_neighbors) % options.size()];
}

int synthetic_rule_label(const MolGraph& g, int v, const SubstructureVocab& vocab) {
  int leaves = 0;
  for (const auto& [u, b] : g.neighbors(v))
    if (g.degree(u) == 1) ++leaves;
  return synthetic_rule_label(g.degree(v), leaves, vocab);
}

std::vector<MolGraph> synthetic_rule_corpus(const SyntheticCorpusConfig& cfg,
                                            const SubstructureVocab& vocab) {
  if (cfg.count < 1 || cfg.min_nodes < 2 || cfg.max_nodes < cfg.min_nodes)
    throw std::invalid_argument("bad synthetic corpus configuration");
  Rng rng(derive_seed(cfg.seed, 0x636f7270));
  std::vector<MolGraph> out;
  out.reserve(cfg.count);
  const int carbon = vocab.require("C");
  for (int i = 0; i < cfg.count; ++i) {
    const int n = cfg.min_nodes +
                  static_cast<int>(rng.uniform_index(cfg.max_nodes - cfg.min_nodes + 1));
    // random tree, degree capped at 4
    std::vector<int> degree(n, 0);
    std::vector<Edge> edges;
    for (int v = 1; v < n; ++v) {
      std::vector<double> w(v, 0.0);
      bool any = false;
      for (int u = 0; u < v; ++u)
        if (degree[u] < 4) {
          w[u] = 1.0;
          any = true;
        }
      int anchor = any ? static_cast<int>(rng.categorical(w)) : 0;
      edges.push_back({anchor, v, BondType::Single});
      ++degree[anchor];
      ++degree[v];
    }
    MolGraph topo(std::vector<int>(n, carbon), edges);
    std::vector<int> labels(n);
    for (int v = 0; v < n; ++v) labels[v] = synthetic_rule_label(topo, v, vocab);
    out.emplace_back(std::move(labels), std::move(edges));
  }
  return out;
}

}  // namespace mimosa
