#include "mimosa/proposal.hpp"

#include <algorithm>
#include <cmath>

namespace mimosa {

const char* op_name(OpKind op) {
  switch (op) {
    case OpKind::Replace: return "replace";
    case OpKind::Add: return "add";
    case OpKind::Delete: return "delete";
  }
  return "?";
}

namespace {

Proposal rejected(OpKind op, std::string reason) {
  Proposal p;
  p.op = op;
  p.valid = false;
  p.reject_reason = std::move(reason);
  return p;
}

// argmax of target density over allowed bond types for one edge, holding
// everything else fixed; ties break toward the smaller bond index
std::optional<MolGraph> best_bond_for_edge(const MolGraph& g, int u, int v,
                                           const TargetDistConfig& target,
                                           const ProposalConfig& pcfg) {
  std::optional<MolGraph> best;
  double best_logp = kLogZero;
  for (BondType b : pcfg.allowed_bonds) {
    MolGraph cand = with_edge_bond(g, u, v, b);
    if (!generation_valid(cand, *target.vocab)) continue;
    const double logp = log_target_density(target, cand);
    if (!best || logp > best_logp) {
      best = std::move(cand);
      best_logp = logp;
    }
  }
  return best;
}

}  // namespace

std::optional<MolGraph> complete_relabel(const MolGraph& y, int v, int symbol,
                                         const TargetDistConfig& target,
                                         const ProposalConfig& pcfg) {
  MolGraph g = with_relabeled_node(y, v, symbol);
  // incident edges in deterministic (peer-sorted) order
  std::vector<int> peers;
  for (const auto& [u, b] : y.neighbors(v)) peers.push_back(u);

  // feasibility pass: force each edge to some legal type, cheapest first
  for (int u : peers) {
    bool placed = false;
    for (BondType b : pcfg.allowed_bonds) {
      MolGraph cand = with_edge_bond(g, v, u, b);
      if (generation_valid(cand, *target.vocab)) {
        g = std::move(cand);
        placed = true;
        break;
      }
    }
    if (!placed) {
      // leave as-is for now; the improvement pass may still fix it once
      // other edges shrink, but a final check decides
    }
  }
  // improvement pass: per-edge argmax of the target density
  for (int u : peers) {
    auto best = best_bond_for_edge(g, v, u, target, pcfg);
    if (best) g = std::move(*best);
  }
  if (!generation_valid(g, *target.vocab)) return std::nullopt;
  return g;
}

std::optional<MolGraph> complete_add(const MolGraph& y, int anchor, int symbol,
                                     const TargetDistConfig& target,
                                     const ProposalConfig& pcfg) {
  std::optional<MolGraph> best;
  double best_logp = kLogZero;
  for (BondType b : pcfg.allowed_bonds) {
    MolGraph cand = with_added_leaf(y, anchor, symbol, b);
    if (!generation_valid(cand, *target.vocab)) continue;
    const double logp = log_target_density(target, cand);
    if (!best || logp > best_logp) {
      best = std::move(cand);
      best_logp = logp;
    }
  }
  return best;
}

MolGraph grown_for_prediction(const MolGraph& y, int anchor, int mask_label) {
  return with_added_leaf(y, anchor, mask_label, BondType::Single);
}

Proposal propose_replace(const MolGraph& y, int v, const SubstructureModels& models,
                         const TargetDistConfig& target, const ProposalConfig& pcfg,
                         Rng& rng) {
  Proposal p;
  p.op = OpKind::Replace;
  p.site = v;
  p.old_symbol = y.label(v);
  std::vector<double> yhat = models.substructure_distribution(y, v);
  p.new_symbol = static_cast<int>(rng.categorical(yhat));
  p.mgnn_old = yhat[p.old_symbol];
  p.mgnn_new = yhat[p.new_symbol];

  auto cand = complete_relabel(y, v, p.new_symbol, target, pcfg);
  if (!cand) return rejected(OpKind::Replace, "no valid rebuild for replacement");
  p.candidate = std::move(*cand);
  p.mgnn_rev = models.substructure_distribution(p.candidate, v)[p.old_symbol];
  const int n = y.node_count();
  p.q_fwd = (1.0 / n) * p.mgnn_new;
  p.q_rev = (1.0 / n) * p.mgnn_rev;
  p.log_target_y = log_target_density(target, y);
  p.log_target_candidate = log_target_density(target, p.candidate);
  p.valid = true;
  return p;
}

Proposal propose_add(const MolGraph& y, int u, const SubstructureModels& models,
                     const TargetDistConfig& target, const ProposalConfig& pcfg,
                     Rng& rng) {
  Proposal p;
  p.op = OpKind::Add;
  p.site = u;
  p.anchor = u;
  if (pcfg.max_nodes > 0 && y.node_count() >= pcfg.max_nodes)
    return rejected(OpKind::Add, "size cap reached");
  if (!has_spare_capacity(y, u, *target.vocab))
    return rejected(OpKind::Add, "anchor is saturated");
  p.bgnn_fwd = models.expand_probability(y, u);

  MolGraph grown = grown_for_prediction(y, u, 0);
  const int leaf = grown.node_count() - 1;
  std::vector<double> yhat = models.substructure_distribution(grown, leaf);
  p.new_symbol = static_cast<int>(rng.categorical(yhat));
  p.mgnn_new = yhat[p.new_symbol];

  auto cand = complete_add(y, u, p.new_symbol, target, pcfg);
  if (!cand) return rejected(OpKind::Add, "no valid bond for added leaf");
  p.candidate = std::move(*cand);
  const int n = y.node_count();
  const double gate = pcfg.add_gate == AddGate::Bernoulli
                          ? p.bgnn_fwd
                          : (p.bgnn_fwd >= pcfg.add_threshold ? 1.0 : 0.0);
  p.q_fwd = (1.0 / n) * gate * p.mgnn_new;
  p.q_rev = 1.0 / (n + 1);
  p.log_target_y = log_target_density(target, y);
  p.log_target_candidate = log_target_density(target, p.candidate);
  p.valid = true;
  return p;
}

Proposal propose_delete(const MolGraph& y, int v, const SubstructureModels& models,
                        const TargetDistConfig& target, const ProposalConfig& pcfg) {
  Proposal p;
  p.op = OpKind::Delete;
  p.site = v;
  p.old_symbol = y.label(v);
  if (y.node_count() < 2)
    return rejected(OpKind::Delete, "deletion would empty the molecule");
  if (y.degree(v) != 1) return rejected(OpKind::Delete, "node is not a leaf");
  const int u = y.neighbors(v).front().first;
  p.anchor = u > v ? u - 1 : u;  // index in the candidate
  p.candidate = with_removed_node(y, v);
  if (!generation_valid(p.candidate, *target.vocab))
    return rejected(OpKind::Delete, "deletion yields invalid molecule");
  p.bgnn_rev = models.expand_probability(p.candidate, p.anchor);
  p.mgnn_old = models.substructure_distribution(y, v)[p.old_symbol];
  const int n = y.node_count();
  const double gate = pcfg.add_gate == AddGate::Bernoulli
                          ? p.bgnn_rev
                          : (p.bgnn_rev >= pcfg.add_threshold ? 1.0 : 0.0);
  p.q_fwd = 1.0 / n;
  p.q_rev = (1.0 / (n - 1)) * gate * p.mgnn_old;
  p.log_target_y = log_target_density(target, y);
  p.log_target_candidate = log_target_density(target, p.candidate);
  p.valid = true;
  return p;
}

Proposal identity_proposal(const MolGraph& y, const SubstructureModels& models,
                           const TargetDistConfig& target) {
  Proposal p;
  p.op = OpKind::Replace;
  p.site = 0;
  p.old_symbol = y.label(0);
  p.new_symbol = p.old_symbol;
  std::vector<double> yhat = models.substructure_distribution(y, 0);
  p.mgnn_old = p.mgnn_new = p.mgnn_rev = yhat[p.old_symbol];
  p.candidate = y;
  const int n = y.node_count();
  p.q_fwd = p.q_rev = (1.0 / n) * p.mgnn_old;
  p.log_target_y = log_target_density(target, y);
  p.log_target_candidate = p.log_target_y;
  p.valid = true;
  return p;
}

std::vector<Proposal> generate_pool(const MolGraph& y,
                                    const SubstructureModels& models,
                                    const TargetDistConfig& target,
                                    const ProposalConfig& pcfg, Rng& rng) {
  std::vector<Proposal> pool;
  pool.push_back(identity_proposal(y, models, target));

  const int n = y.node_count();
  for (int v = 0; v < n; ++v) {
    Proposal p = propose_replace(y, v, models, target, pcfg, rng);
    if (p.valid) pool.push_back(std::move(p));
  }

  std::vector<double> expand = models.expand_probabilities(y);
  for (int u = 0; u < n; ++u) {
    if (!has_spare_capacity(y, u, *target.vocab)) continue;
    const bool gate_open = pcfg.add_gate == AddGate::Bernoulli
                               ? rng.bernoulli(expand[u])
                               : expand[u] >= pcfg.add_threshold;
    if (!gate_open) continue;
    Proposal p = propose_add(y, u, models, target, pcfg, rng);
    if (p.valid) pool.push_back(std::move(p));
  }

  if (n >= 2) {
    for (int v : leaf_nodes(y)) {
      Proposal p = propose_delete(y, v, models, target, pcfg);
      if (p.valid) pool.push_back(std::move(p));
    }
  }
  return pool;
}

std::vector<MovePath> enumerate_move_paths(const MolGraph& y, OpKind op,
                                           const SubstructureModels& models,
                                           const TargetDistConfig& target,
                                           const ProposalConfig& pcfg) {
  std::vector<MovePath> out;
  const int n = y.node_count();
  const int c1 = models.vocab_size();
  const double sel = 1.0 / n;

  if (op == OpKind::Replace) {
    for (int v = 0; v < n; ++v) {
      std::vector<double> yhat = models.substructure_distribution(y, v);
      for (int s = 0; s < c1; ++s) {
        auto cand = complete_relabel(y, v, s, target, pcfg);
        if (!cand) continue;
        MovePath mp;
        mp.prob = sel * yhat[s];
        Proposal& p = mp.proposal;
        p.op = OpKind::Replace;
        p.valid = true;
        p.site = v;
        p.old_symbol = y.label(v);
        p.new_symbol = s;
        p.mgnn_old = yhat[p.old_symbol];
        p.mgnn_new = yhat[s];
        p.candidate = std::move(*cand);
        p.mgnn_rev = models.substructure_distribution(p.candidate, v)[p.old_symbol];
        p.q_fwd = sel * p.mgnn_new;
        p.q_rev = sel * p.mgnn_rev;
        p.log_target_y = log_target_density(target, y);
        p.log_target_candidate = log_target_density(target, p.candidate);
        out.push_back(std::move(mp));
      }
    }
  } else if (op == OpKind::Add) {
    if (pcfg.max_nodes > 0 && n >= pcfg.max_nodes) return out;
    std::vector<double> expand = models.expand_probabilities(y);
    for (int u = 0; u < n; ++u) {
      if (!has_spare_capacity(y, u, *target.vocab)) continue;
      const double gate = pcfg.add_gate == AddGate::Bernoulli
                              ? expand[u]
                              : (expand[u] >= pcfg.add_threshold ? 1.0 : 0.0);
      if (gate <= 0.0) continue;
      MolGraph grown = grown_for_prediction(y, u, 0);
      const int leaf = grown.node_count() - 1;
      std::vector<double> yhat = models.substructure_distribution(grown, leaf);
      for (int s = 0; s < c1; ++s) {
        auto cand = complete_add(y, u, s, target, pcfg);
        if (!cand) continue;
        MovePath mp;
        mp.prob = sel * gate * yhat[s];
        Proposal& p = mp.proposal;
        p.op = OpKind::Add;
        p.valid = true;
        p.site = u;
        p.anchor = u;
        p.new_symbol = s;
        p.bgnn_fwd = expand[u];
        p.mgnn_new = yhat[s];
        p.candidate = std::move(*cand);
        p.q_fwd = sel * gate * p.mgnn_new;
        p.q_rev = 1.0 / (n + 1);
        p.log_target_y = log_target_density(target, y);
        p.log_target_candidate = log_target_density(target, p.candidate);
        out.push_back(std::move(mp));
      }
    }
  } else {
    if (n >= 2) {
      for (int v : leaf_nodes(y)) {
        Proposal p = propose_delete(y, v, models, target, pcfg);
        if (!p.valid) continue;
        MovePath mp;
        mp.prob = sel;
        mp.proposal = std::move(p);
        out.push_back(std::move(mp));
      }
    }
  }
  return out;
}

}  // namespace mimosa
