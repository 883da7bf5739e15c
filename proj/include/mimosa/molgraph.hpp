#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mimosa/vocab.hpp"

namespace mimosa {

struct Edge {
  int u;
  int v;
  BondType bond;
};

// Substructure-level molecular graph: nodes are vocab ids, edges typed
// bonds. Undirected, simple, immutable after construction; edits build new
// values. Connectivity is a validity rule (chem_rules), not a construction
// requirement, so invalid intermediate states can be represented.
class MolGraph {
 public:
  MolGraph() = default;
  MolGraph(std::vector<int> nodes, std::vector<Edge> edges);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int label(int v) const { return nodes_.at(v); }
  const std::vector<int>& labels() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  // neighbors sorted by node index; fixed iteration order keeps every
  // summation downstream reproducible
  const std::vector<std::pair<int, BondType>>& neighbors(int v) const {
    return adj_.at(v);
  }
  int degree(int v) const { return static_cast<int>(adj_.at(v).size()); }
  bool has_edge(int u, int v) const;
  BondType edge_bond(int u, int v) const;  // throws if absent
  bool connected() const;

  // summed doubled bond order incident to v
  int doubled_order_at(int v) const;
  // external edge count (same as degree; named for ring-capacity checks)
  int external_edge_count(int v) const { return degree(v); }

  bool operator==(const MolGraph& o) const {
    return nodes_ == o.nodes_ && edges_ == o.edges_;
  }

 private:
  std::vector<int> nodes_;
  std::vector<Edge> edges_;  // normalized: u < v, sorted
  std::vector<std::vector<std::pair<int, BondType>>> adj_;
};

inline bool operator==(const Edge& a, const Edge& b) {
  return a.u == b.u && a.v == b.v && a.bond == b.bond;
}

// Atom-level view used by SMILES and ring perception.
struct AtomNode {
  std::string element;
  bool aromatic = false;
  int charge = 0;
  int hcount = -1;  // -1 = implicit
};

struct AtomGraph {
  std::vector<AtomNode> atoms;
  std::vector<Edge> bonds;

  int atom_count() const { return static_cast<int>(atoms.size()); }
  std::vector<std::vector<std::pair<int, BondType>>> adjacency() const;
};

// --- graph operations ------------------------------------------------

// Nodes with degree 1, ascending.
std::vector<int> leaf_nodes(const MolGraph& g);

// Exact label- and bond-preserving isomorphism test (backtracking search;
// graphs are small).
bool graph_isomorphic(const MolGraph& a, const MolGraph& b);

inline constexpr int kCanonicalNodeCap = 12;

// Canonical text key: equal keys iff graph_isomorphic. Exact
// individualization-refinement labeling; throws if node_count exceeds cap.
std::string canonical_key(const MolGraph& g, int cap = kCanonicalNodeCap);

// Deterministic isomorphism-invariant ordering key that never throws:
// exact canonical key up to cap, WL-refinement digest beyond it. Not
// guaranteed injective past the cap; used for tie-breaking and trace ids.
std::string ordering_key(const MolGraph& g, int cap = kCanonicalNodeCap);

// --- edit helpers (each returns a new value) ---------------------------

MolGraph with_edge_bond(const MolGraph& g, int u, int v, BondType b);
MolGraph with_added_leaf(const MolGraph& g, int anchor, int label, BondType b);
MolGraph with_removed_node(const MolGraph& g, int v);
MolGraph with_relabeled_node(const MolGraph& g, int v, int label);
// node order permuted: node i of the result is node perm[i] of g
MolGraph with_permuted_nodes(const MolGraph& g, const std::vector<int>& perm);

}  // namespace mimosa
