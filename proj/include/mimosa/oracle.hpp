#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "mimosa/sampler.hpp"

namespace mimosa {

// Enumerable molecule state space: the closure of the single-node states
// under the three operations, canonical-key deduplicated.
struct StateSpace {
  std::shared_ptr<const SubstructureVocab> vocab;
  int max_nodes = 0;
  std::vector<MolGraph> states;
  std::unordered_map<std::string, int> index;  // canonical key -> state id

  int size() const { return static_cast<int>(states.size()); }
  int id_of(const MolGraph& g) const;  // throws if absent
};

inline constexpr std::size_t kStateSpaceGuard = 100000;

StateSpace enumerate_states(std::shared_ptr<const SubstructureVocab> vocab,
                            int max_nodes, const KernelConfig& kernel,
                            const TargetDistConfig& target,
                            const SubstructureModels& models,
                            std::size_t guard = kStateSpaceGuard);

// Row-stochastic transition matrix over a state space.
struct TransitionMatrix {
  int n = 0;
  std::vector<double> a;  // row-major

  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double max_row_sum_error() const;
};

// Exact kernel expansion: entry (i,j) sums gamma_op * q(path) * min{1, w}
// over every proposal path from state i landing on state j; the diagonal
// absorbs all rejection and gating mass. Throws if any row does not sum to
// 1 within 1e-12.
TransitionMatrix build_transition_matrix(const StateSpace& space,
                                         const KernelConfig& kernel,
                                         const TargetDistConfig& target,
                                         const SubstructureModels& models);
// Serial reference implementation (identical output; kept for tests and the
// benchmark).
TransitionMatrix build_transition_matrix_serial(const StateSpace& space,
                                                const KernelConfig& kernel,
                                                const TargetDistConfig& target,
                                                const SubstructureModels& models);

// Normalized exp(log_target_density) over the space.
std::vector<double> target_probabilities(const StateSpace& space,
                                         const TargetDistConfig& target);

// Left eigenvector for eigenvalue 1 by power iteration to 1e-12; throws
// after 1e6 sweeps without convergence.
std::vector<double> stationary_distribution(const TransitionMatrix& t);

// max over (i,j) of |p_i T_ij - p_j T_ji|
double detailed_balance_check(const TransitionMatrix& t,
                              const std::vector<double>& p);

// 0.5 * sum |empirical - p| from visit counts.
double empirical_vs_exact(const std::vector<long>& visits,
                          const std::vector<double>& p);

struct ReachabilityReport {
  bool irreducible = false;
  int max_distance = -1;  // longest shortest path over reachable pairs
};

// BFS over positive entries of T; Lemma-1 style bound is 2 * max_nodes.
ReachabilityReport reachability(const TransitionMatrix& t);

// Visit counts of an mh_chain run over the space.
std::vector<long> chain_visit_counts(MhChain& chain, const StateSpace& space,
                                     long steps);

}  // namespace mimosa
