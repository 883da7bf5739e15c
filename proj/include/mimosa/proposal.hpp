#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mimosa/chem_rules.hpp"
#include "mimosa/models.hpp"
#include "mimosa/molgraph.hpp"
#include "mimosa/properties.hpp"
#include "mimosa/rng.hpp"

namespace mimosa {

enum class OpKind : int { Replace = 0, Add = 1, Delete = 2 };

const char* op_name(OpKind op);

enum class AddGate { Bernoulli, Threshold };

struct ProposalConfig {
  std::vector<BondType> allowed_bonds = {BondType::Single, BondType::Double,
                                         BondType::Triple, BondType::Aromatic};
  AddGate add_gate = AddGate::Bernoulli;
  double add_threshold = 0.5;
  // adds are rejected once a molecule reaches this node count (0 = no cap);
  // keeps enumerable state spaces closed under the kernel
  int max_nodes = 0;
};

// Candidate next state plus every density the acceptance weights consume.
struct Proposal {
  OpKind op = OpKind::Replace;
  bool valid = false;
  std::string reject_reason;

  MolGraph candidate;
  int site = -1;    // replaced node / delete victim / add anchor
  int anchor = -1;  // delete: former neighbor; add: anchor (= site)
  int old_symbol = -1;
  int new_symbol = -1;

  // model terms (Eqs. 10-12 bookkeeping)
  double mgnn_old = 0.0;  // [mGNN(Y,v)]_{s_v}
  double mgnn_new = 0.0;  // [mGNN(.,v)]_{s'_v}
  double mgnn_rev = 0.0;  // [mGNN(Y',v)]_{s_v} (replace reverse)
  double bgnn_fwd = 0.0;  // add: bGNN(Y,u)
  double bgnn_rev = 0.0;  // delete: bGNN(Y',u)

  // realized proposal densities; pathwise at generation, replaced with
  // state-level marginal masses by the exact-kernel machinery
  double q_fwd = 0.0;
  double q_rev = 0.0;

  double log_target_y = 0.0;
  double log_target_candidate = 0.0;
  double log_weight = 0.0;  // filled by the sampler weight functions
};

// Relabel node v to `symbol` and rebuild its incident bonds: sequential
// per-edge argmax of the target density over the allowed legal bond types
// (paper's enumerate-and-take-largest rule, made deterministic). Returns
// nullopt when no legal completion exists.
std::optional<MolGraph> complete_relabel(const MolGraph& y, int v, int symbol,
                                         const TargetDistConfig& target,
                                         const ProposalConfig& pcfg);

// Attach a new leaf with `symbol` at `anchor`, bond by the argmax rule.
std::optional<MolGraph> complete_add(const MolGraph& y, int anchor, int symbol,
                                     const TargetDistConfig& target,
                                     const ProposalConfig& pcfg);

// The grown graph used to predict the new leaf's substructure: masked leaf
// attached by a single placeholder bond.
MolGraph grown_for_prediction(const MolGraph& y, int anchor, int mask_label);

Proposal propose_replace(const MolGraph& y, int v, const SubstructureModels& models,
                         const TargetDistConfig& target, const ProposalConfig& pcfg,
                         Rng& rng);
Proposal propose_add(const MolGraph& y, int u, const SubstructureModels& models,
                     const TargetDistConfig& target, const ProposalConfig& pcfg,
                     Rng& rng);
Proposal propose_delete(const MolGraph& y, int v, const SubstructureModels& models,
                        const TargetDistConfig& target, const ProposalConfig& pcfg);

// Identity candidate (replace node 0 by its own substructure); keeps the
// current molecule selectable in every pool.
Proposal identity_proposal(const MolGraph& y, const SubstructureModels& models,
                           const TargetDistConfig& target);

// Pool semantics: the identity candidate, one replace draw per node, one
// gated add draw per under-capacity node, and the delete for every leaf;
// invalid candidates are dropped.
std::vector<Proposal> generate_pool(const MolGraph& y,
                                    const SubstructureModels& models,
                                    const TargetDistConfig& target,
                                    const ProposalConfig& pcfg, Rng& rng);

// One within-operation path of the exact kernel: candidate plus its
// realized probability (selection x gate x symbol); used by the oracle and
// the mh_chain mode.
struct MovePath {
  Proposal proposal;
  double prob = 0.0;
};

std::vector<MovePath> enumerate_move_paths(const MolGraph& y, OpKind op,
                                           const SubstructureModels& models,
                                           const TargetDistConfig& target,
                                           const ProposalConfig& pcfg);

}  // namespace mimosa
