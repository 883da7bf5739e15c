#include "mimosa/chem_rules.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace mimosa {

ValidityReport check_validity(const MolGraph& g, const SubstructureVocab& vocab) {
  ValidityReport r;
  if (g.node_count() == 0) {
    r.flag(-1, "empty molecule");
    return r;
  }
  for (int v = 0; v < g.node_count(); ++v) {
    const VocabEntry& e = vocab.entry(g.label(v));
    if (e.is_ring()) {
      if (g.external_edge_count(v) > e.attachment_capacity)
        r.flag(v, "ring " + e.label + " exceeds attachment capacity " +
                      std::to_string(e.attachment_capacity));
    } else {
      if (g.doubled_order_at(v) > 2 * e.max_valence)
        r.flag(v, "atom " + e.label + " exceeds max valence " +
                      std::to_string(e.max_valence));
    }
  }
  if (!g.connected()) r.flag(-1, "graph is disconnected");
  return r;
}

std::vector<BondType> enumerate_bond_types(const MolGraph& g, int u, int v,
                                           const SubstructureVocab& vocab) {
  std::vector<BondType> out;
  for (int t = 0; t < kBondTypeCount; ++t) {
    BondType b = static_cast<BondType>(t);
    MolGraph candidate = with_edge_bond(g, u, v, b);
    if (check_validity(candidate, vocab).valid) out.push_back(b);
  }
  return out;
}

namespace {

// Greedy assignment of a ring node's external edges to template positions;
// returns the remaining free positions' doubled capacities, or nullopt if
// some edge cannot be placed. `skip_peer` excludes one incident edge.
std::optional<std::vector<std::pair<int, int>>> free_positions_after_assignment(
    const MolGraph& g, int ring_node, const RingTemplate& t, int skip_peer) {
  std::vector<char> used(t.size(), 0);
  for (const auto& [peer, bond] : g.neighbors(ring_node)) {
    if (peer == skip_peer) continue;
    int pos = -1;
    for (int p = 0; p < t.size(); ++p) {
      if (used[p]) continue;
      if (t.free_doubled[p] < doubled_order(bond)) continue;
      if (bond == BondType::Aromatic && !t.aromatic[p]) continue;
      pos = p;
      break;
    }
    if (pos < 0) return std::nullopt;
    used[pos] = 1;
  }
  std::vector<std::pair<int, int>> free;  // (position, doubled capacity)
  for (int p = 0; p < t.size(); ++p)
    if (!used[p] && t.free_doubled[p] > 0) free.emplace_back(p, t.free_doubled[p]);
  return free;
}

}  // namespace

std::vector<MolGraph> enumerate_ring_attachments(const MolGraph& g,
                                                 int ring_node, int neighbor,
                                                 const SubstructureVocab& vocab) {
  const VocabEntry& e = vocab.entry(g.label(ring_node));
  if (!e.is_ring())
    throw std::invalid_argument("enumerate_ring_attachments: node is not a ring");
  const RingTemplate& t = *e.ring;

  int externals = g.external_edge_count(ring_node);
  if (!g.has_edge(ring_node, neighbor)) ++externals;
  if (externals > e.attachment_capacity) return {};

  auto free = free_positions_after_assignment(g, ring_node, t, neighbor);
  if (!free) return {};
  std::vector<MolGraph> out;
  std::vector<std::string> keys;
  for (const auto& [pos, cap] : *free) {
    for (int ti = 0; ti < kBondTypeCount; ++ti) {
      BondType b = static_cast<BondType>(ti);
      if (doubled_order(b) > cap) continue;
      // aromatic attachments only onto aromatic positions
      if (b == BondType::Aromatic && !t.aromatic[pos]) continue;
      MolGraph candidate = with_edge_bond(g, ring_node, neighbor, b);
      if (!check_validity(candidate, vocab).valid) continue;
      bool dup = false;
      if (candidate.node_count() <= kCanonicalNodeCap) {
        std::string key = canonical_key(candidate);
        dup = std::find(keys.begin(), keys.end(), key) != keys.end();
        if (!dup) keys.push_back(key);
      } else {
        for (const MolGraph& prev : out)
          if (graph_isomorphic(prev, candidate)) {
            dup = true;
            break;
          }
      }
      if (!dup) out.push_back(std::move(candidate));
    }
  }
  return out;
}

int spare_doubled_capacity(const MolGraph& g, int v,
                           const SubstructureVocab& vocab) {
  const VocabEntry& e = vocab.entry(g.label(v));
  if (!e.is_ring()) {
    int spare = 2 * e.max_valence - g.doubled_order_at(v);
    return spare > 0 ? spare : 0;
  }
  if (g.external_edge_count(v) >= e.attachment_capacity) return 0;
  auto free = free_positions_after_assignment(g, v, *e.ring, -1);
  if (!free) return 0;
  int best = 0;
  for (const auto& [pos, cap] : *free) best = std::max(best, cap);
  return best;
}

bool has_spare_capacity(const MolGraph& g, int v, const SubstructureVocab& vocab) {
  return spare_doubled_capacity(g, v, vocab) >= 2;
}

bool ring_attachments_placeable(const MolGraph& g, int v,
                                const SubstructureVocab& vocab) {
  const VocabEntry& e = vocab.entry(g.label(v));
  if (!e.is_ring()) return true;
  return free_positions_after_assignment(g, v, *e.ring, -1).has_value();
}

bool generation_valid(const MolGraph& g, const SubstructureVocab& vocab) {
  if (!check_validity(g, vocab).valid) return false;
  for (int v = 0; v < g.node_count(); ++v)
    if (!ring_attachments_placeable(g, v, vocab)) return false;
  return true;
}

}  // namespace mimosa
