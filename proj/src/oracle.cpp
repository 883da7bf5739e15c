#include "mimosa/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mimosa {

int StateSpace::id_of(const MolGraph& g) const {
  auto it = index.find(canonical_key(g));
  if (it == index.end())
    throw std::invalid_argument("state not in enumerated space");
  return it->second;
}

StateSpace enumerate_states(std::shared_ptr<const SubstructureVocab> vocab,
                            int max_nodes, const KernelConfig& kernel,
                            const TargetDistConfig& target,
                            const SubstructureModels& models,
                            std::size_t guard) {
  StateSpace space;
  space.vocab = vocab;
  space.max_nodes = max_nodes;
  KernelConfig k = kernel;
  k.proposal.max_nodes = max_nodes;

  std::deque<int> frontier;
  auto try_add = [&](const MolGraph& g) {
    if (g.node_count() > max_nodes) return;
    if (!generation_valid(g, *vocab)) return;
    std::string key = canonical_key(g);
    if (space.index.count(key)) return;
    if (space.states.size() >= guard)
      throw std::runtime_error("state space explosion guard tripped at " +
                               std::to_string(guard) + " states");
    space.index.emplace(std::move(key), space.size());
    space.states.push_back(g);
    frontier.push_back(space.size() - 1);
  };

  for (int id = 0; id < vocab->size(); ++id)
    try_add(MolGraph({id}, {}));

  while (!frontier.empty()) {
    const int si = frontier.front();
    frontier.pop_front();
    const MolGraph y = space.states[si];
    for (int op = 0; op < 3; ++op)
      for (const MovePath& mp :
           enumerate_move_paths(y, static_cast<OpKind>(op), models, target,
                                k.proposal))
        try_add(mp.proposal.candidate);
  }
  return space;
}

double TransitionMatrix::max_row_sum_error() const {
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += at(i, j);
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

namespace {

struct StateTables {
  double log_density;
  // per op: candidate state -> marginal proposal mass
  std::array<std::unordered_map<int, double>, 3> mass;
  // raw paths for paper-convention weights
  std::array<std::vector<MovePath>, 3> paths;
  std::array<std::vector<int>, 3> path_target;  // state id per path
};

OpKind reverse_op(OpKind op) {
  switch (op) {
    case OpKind::Replace: return OpKind::Replace;
    case OpKind::Add: return OpKind::Delete;
    case OpKind::Delete: return OpKind::Add;
  }
  return OpKind::Replace;
}

double gamma_of(const KernelConfig& k, OpKind op) {
  switch (op) {
    case OpKind::Replace: return k.gamma_replace;
    case OpKind::Add: return k.gamma_add;
    case OpKind::Delete: return k.gamma_delete;
  }
  return 0.0;
}

TransitionMatrix build_matrix_impl(const StateSpace& space,
                                   const KernelConfig& kernel,
                                   const TargetDistConfig& target,
                                   const SubstructureModels& models,
                                   bool parallel) {
  kernel.validate(false);
  const int n = space.size();
  KernelConfig k = kernel;
  k.proposal.max_nodes = space.max_nodes;

  std::vector<StateTables> tables(n);
  // pass 1: per-state proposal paths and marginal masses (row-parallel)
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#else
  (void)parallel;
#endif
  for (int i = 0; i < n; ++i) {
    StateTables& t = tables[i];
    t.log_density = log_target_density(target, space.states[i]);
    for (int op = 0; op < 3; ++op) {
      t.paths[op] = enumerate_move_paths(space.states[i], static_cast<OpKind>(op),
                                         models, target, k.proposal);
      for (const MovePath& mp : t.paths[op]) {
        const int j = space.id_of(mp.proposal.candidate);
        t.path_target[op].push_back(j);
        t.mass[op][j] += mp.prob;
      }
    }
  }

  TransitionMatrix T;
  T.n = n;
  T.a.assign(static_cast<std::size_t>(n) * n, 0.0);

  // pass 2: entries with acceptance probabilities (row-parallel; reads the
  // other states' tables read-only)
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int i = 0; i < n; ++i) {
    double stay = 0.0;
    for (int op = 0; op < 3; ++op) {
      const double gamma = gamma_of(k, static_cast<OpKind>(op));
      double op_mass = 0.0;
      for (std::size_t pi = 0; pi < tables[i].paths[op].size(); ++pi) {
        const MovePath& mp = tables[i].paths[op][pi];
        const int j = tables[i].path_target[op][pi];
        op_mass += mp.prob;
        double logw;
        if (k.convention == WeightConvention::TextbookMh) {
          const double q_fwd = tables[i].mass[op].at(j);
          const auto& rev = tables[j].mass[static_cast<int>(
              reverse_op(static_cast<OpKind>(op)))];
          auto rit = rev.find(i);
          const double q_rev = rit == rev.end() ? 0.0 : rit->second;
          if (!(q_rev > 0.0)) {
            stay += gamma * mp.prob;  // irreversible path: zero flow
            continue;
          }
          logw = tables[j].log_density - tables[i].log_density +
                 std::log(q_rev) - std::log(q_fwd);
        } else {
          logw = log_weight(k, mp.proposal);
        }
        const double accept = std::exp(std::min(0.0, logw));
        T.at(i, j) += gamma * mp.prob * accept;
        stay += gamma * mp.prob * (1.0 - accept);
      }
      // gating/selection mass that never produced a candidate
      stay += gamma * (1.0 - op_mass);
    }
    T.at(i, i) += stay;
  }

  const double err = T.max_row_sum_error();
  if (err > 1e-12)
    throw std::runtime_error("transition matrix row sums off by " +
                             std::to_string(err));
  return T;
}

}  // namespace

TransitionMatrix build_transition_matrix(const StateSpace& space,
                                         const KernelConfig& kernel,
                                         const TargetDistConfig& target,
                                         const SubstructureModels& models) {
  return build_matrix_impl(space, kernel, target, models, true);
}

TransitionMatrix build_transition_matrix_serial(const StateSpace& space,
                                                const KernelConfig& kernel,
                                                const TargetDistConfig& target,
                                                const SubstructureModels& models) {
  return build_matrix_impl(space, kernel, target, models, false);
}

std::vector<double> target_probabilities(const StateSpace& space,
                                         const TargetDistConfig& target) {
  std::vector<double> logp(space.size());
  double mx = kLogZero;
  for (int i = 0; i < space.size(); ++i) {
    logp[i] = log_target_density(target, space.states[i]);
    mx = std::max(mx, logp[i]);
  }
  double total = 0.0;
  std::vector<double> p(space.size(), 0.0);
  for (int i = 0; i < space.size(); ++i) {
    p[i] = std::exp(logp[i] - mx);
    total += p[i];
  }
  for (double& x : p) x /= total;
  return p;
}

std::vector<double> stationary_distribution(const TransitionMatrix& t) {
  const int n = t.n;
  if (n == 0) throw std::invalid_argument("empty transition matrix");
  std::vector<double> pi(n, 1.0 / n), next(n, 0.0);
  for (long iter = 0; iter < 1000000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      const double w = pi[i];
      if (w == 0.0) continue;
      for (int j = 0; j < n; ++j) next[j] += w * t.at(i, j);
    }
    double total = 0.0;
    for (double x : next) total += x;
    for (double& x : next) x /= total;
    double delta = 0.0;
    for (int j = 0; j < n; ++j) delta = std::max(delta, std::abs(next[j] - pi[j]));
    pi.swap(next);
    if (delta <= 1e-12) return pi;
  }
  throw std::runtime_error("power iteration did not converge in 1e6 sweeps");
}

double detailed_balance_check(const TransitionMatrix& t,
                              const std::vector<double>& p) {
  if (static_cast<int>(p.size()) != t.n)
    throw std::invalid_argument("detailed_balance_check: size mismatch");
  double worst = 0.0;
  for (int i = 0; i < t.n; ++i)
    for (int j = 0; j < t.n; ++j)
      worst = std::max(worst, std::abs(p[i] * t.at(i, j) - p[j] * t.at(j, i)));
  return worst;
}

double empirical_vs_exact(const std::vector<long>& visits,
                          const std::vector<double>& p) {
  if (visits.size() != p.size())
    throw std::invalid_argument("empirical_vs_exact: size mismatch");
  long total = 0;
  for (long v : visits) total += v;
  if (total == 0) throw std::invalid_argument("empirical_vs_exact: no visits");
  double tv = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    tv += std::abs(static_cast<double>(visits[i]) / total - p[i]);
  return 0.5 * tv;
}

ReachabilityReport reachability(const TransitionMatrix& t) {
  ReachabilityReport rep;
  const int n = t.n;
  int worst = 0;
  bool all_reach = true;
  for (int s = 0; s < n; ++s) {
    std::vector<int> dist(n, -1);
    std::deque<int> q{s};
    dist[s] = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int u = 0; u < n; ++u)
        if (t.at(v, u) > 0.0 && dist[u] < 0) {
          dist[u] = dist[v] + 1;
          q.push_back(u);
        }
    }
    for (int u = 0; u < n; ++u) {
      if (dist[u] < 0)
        all_reach = false;
      else
        worst = std::max(worst, dist[u]);
    }
  }
  rep.irreducible = all_reach;
  rep.max_distance = worst;
  return rep;
}

std::vector<long> chain_visit_counts(MhChain& chain, const StateSpace& space,
                                     long steps) {
  std::vector<long> visits(space.size(), 0);
  for (long s = 0; s < steps; ++s) {
    chain.step();
    auto it = space.index.find(chain.state_key());
    if (it == space.index.end())
      throw std::runtime_error("chain left the enumerated space");
    ++visits[it->second];
  }
  return visits;
}

}  // namespace mimosa
