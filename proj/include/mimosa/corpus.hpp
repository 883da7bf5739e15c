#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mimosa/molgraph.hpp"
#include "mimosa/vocab.hpp"

namespace mimosa {

// Parse every molecule of a SMILES corpus file; throws with the offending
// line on failure.
std::vector<MolGraph> load_corpus_graphs(const std::string& path,
                                         const SubstructureVocab& vocab);

struct SyntheticCorpusConfig {
  int count = 10000;
  int min_nodes = 4;
  int max_nodes = 9;
  std::uint64_t seed = 2024;
};

// Ground-truth labeling rule of the synthetic corpus: the label is a fixed
// function of the node's degree and its number of leaf neighbors, restricted
// to atom entries whose valence admits the degree. Deterministic, so a
// masked node is exactly recoverable from its neighborhood.
int synthetic_rule_label(int degree, int leaf_neighbors,
                         const SubstructureVocab& vocab);
int synthetic_rule_label(const MolGraph& g, int v, const SubstructureVocab& vocab);

// Random single-bond trees (degree <= 4) relabeled by the rule above.
std::vector<MolGraph> synthetic_rule_corpus(const SyntheticCorpusConfig& cfg,
                                            const SubstructureVocab& vocab);

}  // namespace mimosa
