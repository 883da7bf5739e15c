#pragma once

#include <string>
#include <vector>

#include "mimosa/molgraph.hpp"
#include "mimosa/vocab.hpp"

namespace mimosa {

// Validity indicator for the target distribution: report, don't throw.
struct ValidityReport {
  bool valid = true;
  std::vector<std::pair<int, std::string>> violations;  // (node, reason)

  void flag(int node, std::string reason) {
    valid = false;
    violations.emplace_back(node, std::move(reason));
  }
};

// Valid iff every atom node's summed incident bond order fits its
// max_valence, every ring node's external edge count fits its
// attachment_capacity, and the graph is connected.
ValidityReport check_validity(const MolGraph& g, const SubstructureVocab& vocab);

inline bool is_valid(const MolGraph& g, const SubstructureVocab& vocab) {
  return check_validity(g, vocab).valid;
}

// All bond types for which setting edge (u,v) to that type yields a valid
// graph; deterministic ascending order, subset of the 4 variants.
std::vector<BondType> enumerate_bond_types(const MolGraph& g, int u, int v,
                                           const SubstructureVocab& vocab);

// One candidate per distinct attachment position x per-position-legal bond
// type for joining `ring_node` and `neighbor`; validity-filtered and
// deduplicated under canonical_key.
std::vector<MolGraph> enumerate_ring_attachments(const MolGraph& g,
                                                 int ring_node, int neighbor,
                                                 const SubstructureVocab& vocab);

// Spare doubled valence at v given current incident bonds (atom nodes);
// for ring nodes returns the best free template position's doubled valence
// if an external edge slot remains, else 0.
int spare_doubled_capacity(const MolGraph& g, int v,
                           const SubstructureVocab& vocab);

// Whether v can anchor one more single bond.
bool has_spare_capacity(const MolGraph& g, int v, const SubstructureVocab& vocab);

// Ring nodes: whether every incident edge can be placed on a distinct
// template position with enough free valence (true for atom nodes).
bool ring_attachments_placeable(const MolGraph& g, int v,
                                const SubstructureVocab& vocab);

// check_validity plus per-ring-node placement feasibility; the filter used
// on every generated candidate.
bool generation_valid(const MolGraph& g, const SubstructureVocab& vocab);

}  // namespace mimosa
