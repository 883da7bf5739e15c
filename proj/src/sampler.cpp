#include "mimosa/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mimosa {

void KernelConfig::validate(bool require_stationarity) const {
  const double sum = gamma_replace + gamma_add + gamma_delete;
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("kernel gammas must sum to 1");
  if (gamma_replace < 0 || gamma_add < 0 || gamma_delete < 0)
    throw std::invalid_argument("kernel gammas must be nonnegative");
  if (require_stationarity && std::abs(gamma_add - gamma_delete) > 1e-12)
    throw std::invalid_argument(
        "stationarity requires gamma_add == gamma_delete");
}

void RunConfig::validate() const {
  if (particles < 1) throw std::invalid_argument("particles must be >= 1");
  if (t_burnin < 0 || t_burnin > t_max)
    throw std::invalid_argument("need 0 <= t_burnin <= t_max");
}

double log_weight(const KernelConfig& kernel, const Proposal& p) {
  if (!p.valid) throw std::invalid_argument("log_weight: rejected proposal");
  if (p.log_target_y == kLogZero)
    throw std::domain_error("log_weight: current state has zero density");
  const double delta = p.log_target_candidate - p.log_target_y;
  if (kernel.convention == WeightConvention::TextbookMh)
    return delta + std::log(p.q_rev) - std::log(p.q_fwd);
  // paper convention, Eqs. 10-12 as printed
  switch (p.op) {
    case OpKind::Replace:
      return delta + std::log(p.mgnn_new) - std::log(p.mgnn_old);
    case OpKind::Add:
      return delta + std::log(p.bgnn_fwd) + std::log(p.mgnn_new) -
             std::log1p(-p.bgnn_fwd);
    case OpKind::Delete:
      return delta + std::log1p(-p.bgnn_rev) - std::log(p.bgnn_rev) -
             std::log(p.mgnn_old);
  }
  return kLogZero;
}

namespace {

double checked_weight(const KernelConfig& kernel, const Proposal& p, OpKind op) {
  if (p.op != op) throw std::invalid_argument("weight: proposal op mismatch");
  return std::exp(log_weight(kernel, p));
}

}  // namespace

double weight_replace(const KernelConfig& k, const Proposal& p) {
  return checked_weight(k, p, OpKind::Replace);
}
double weight_add(const KernelConfig& k, const Proposal& p) {
  return checked_weight(k, p, OpKind::Add);
}
double weight_delete(const KernelConfig& k, const Proposal& p) {
  return checked_weight(k, p, OpKind::Delete);
}

// --- population pipeline ---------------------------------------------------

namespace {

std::vector<std::size_t> systematic_resample(const std::vector<double>& weights,
                                             int n, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  std::vector<std::size_t> picks;
  picks.reserve(n);
  if (!(total > 0.0) || !std::isfinite(total)) {
    // degenerate weights: fall back to uniform strides
    for (int k = 0; k < n; ++k)
      picks.push_back(static_cast<std::size_t>(
          rng.uniform_index(weights.size())));
    return picks;
  }
  const double stride = total / n;
  double pos = rng.uniform() * stride;
  double acc = 0.0;
  std::size_t i = 0;
  for (int k = 0; k < n; ++k) {
    const double target = pos + k * stride;
    while (i + 1 < weights.size() && acc + weights[i] <= target) {
      acc += weights[i];
      ++i;
    }
    picks.push_back(i);
  }
  return picks;
}

}  // namespace

std::vector<std::vector<Proposal>> generate_pools_serial(
    const std::vector<MolGraph>& theta, const SubstructureModels& models,
    const TargetDistConfig& target, const ProposalConfig& pcfg,
    std::uint64_t seed, int iter) {
  std::vector<std::vector<Proposal>> pools(theta.size());
  for (std::size_t pi = 0; pi < theta.size(); ++pi) {
    Rng stream(derive_seed(seed, 0x706f6f6c, iter, pi));
    pools[pi] = generate_pool(theta[pi], models, target, pcfg, stream);
  }
  return pools;
}

std::vector<std::vector<Proposal>> generate_pools(
    const std::vector<MolGraph>& theta, const SubstructureModels& models,
    const TargetDistConfig& target, const ProposalConfig& pcfg,
    std::uint64_t seed, int iter) {
  const int np = static_cast<int>(theta.size());
  std::vector<std::vector<Proposal>> pools(np);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int pi = 0; pi < np; ++pi) {
    Rng stream(derive_seed(seed, 0x706f6f6c, iter, pi));
    pools[pi] = generate_pool(theta[pi], models, target, pcfg, stream);
  }
  return pools;
}

MimosaResult run_mimosa(const RunConfig& run, const KernelConfig& kernel,
                        const TargetDistConfig& target,
                        const SubstructureModels& models) {
  run.validate();
  kernel.validate(false);
  MimosaResult res;
  std::vector<MolGraph> theta{target.input};

  auto phi_insert = [&](const MolGraph& g) {
    std::string key = ordering_key(g);
    for (const auto& k : res.phi_keys)
      if (k == key) return;
    res.phi_keys.push_back(std::move(key));
    res.phi.push_back(g);
  };

  for (int iter = 0; iter < run.t_max; ++iter) {
    IterationTrace it;
    it.burnin = iter < run.t_burnin;

    // per-particle pools, mergeable in particle order for any thread count
    const int np = static_cast<int>(theta.size());
    auto pools = run.parallel
                     ? generate_pools(theta, models, target, kernel.proposal,
                                      run.seed, iter)
                     : generate_pools_serial(theta, models, target,
                                             kernel.proposal, run.seed, iter);

    for (int pi = 0; pi < np; ++pi) {
      for (Proposal& p : pools[pi]) {
        PoolRecord rec;
        rec.parent = pi;
        rec.op = p.op;
        rec.key = ordering_key(p.candidate);
        rec.log_density = p.log_target_candidate;
        rec.log_weight = log_weight(kernel, p);
        rec.graph = std::move(p.candidate);
        it.pool.push_back(std::move(rec));
      }
    }

    if (it.pool.empty()) {
      it.warning = "empty candidate pool; stopping early";
      res.trace.early_stop = true;
      res.trace.iterations.push_back(std::move(it));
      break;
    }

    const int n_select = run.particles;
    if (it.burnin) {
      std::vector<std::size_t> order(it.pool.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ra = it.pool[a];
        const auto& rb = it.pool[b];
        if (ra.log_density != rb.log_density) return ra.log_density > rb.log_density;
        if (ra.key != rb.key) return ra.key < rb.key;
        return a < b;
      });
      const std::size_t take = std::min<std::size_t>(n_select, order.size());
      it.selected.assign(order.begin(), order.begin() + take);
    } else {
      double max_lw = kLogZero;
      for (const auto& rec : it.pool) max_lw = std::max(max_lw, rec.log_weight);
      std::vector<double> w(it.pool.size(), 0.0);
      for (std::size_t i = 0; i < w.size(); ++i) {
        const double lw = it.pool[i].log_weight;
        w[i] = std::isfinite(max_lw)
                   ? std::exp(std::min(lw, max_lw) - max_lw)
                   : (lw == max_lw ? 1.0 : 0.0);
      }
      Rng resample_rng(derive_seed(run.seed, 0x73616d70, iter));
      for (std::size_t pick : systematic_resample(w, n_select, resample_rng))
        it.selected.push_back(static_cast<int>(pick));
    }

    theta.clear();
    double min_density = std::numeric_limits<double>::infinity();
    for (int idx : it.selected) {
      it.pool[idx].accepted = true;
      theta.push_back(it.pool[idx].graph);
      min_density = std::min(min_density, it.pool[idx].log_density);
      phi_insert(it.pool[idx].graph);
    }
    it.min_selected_density = min_density;
    res.trace.iterations.push_back(std::move(it));
  }
  return res;
}

// --- single-chain MH --------------------------------------------------------

namespace {

OpKind reverse_op(OpKind op) {
  switch (op) {
    case OpKind::Replace: return OpKind::Replace;
    case OpKind::Add: return OpKind::Delete;
    case OpKind::Delete: return OpKind::Add;
  }
  return OpKind::Replace;
}

}  // namespace

MhChain::MhChain(const KernelConfig& kernel, const TargetDistConfig& target,
                 const SubstructureModels& models, std::uint64_t seed)
    : MhChain(kernel, target, models, seed, target.input) {}

MhChain::MhChain(const KernelConfig& kernel, const TargetDistConfig& target,
                 const SubstructureModels& models, std::uint64_t seed,
                 MolGraph init)
    : kernel_(kernel),
      target_(target),
      models_(models),
      rng_(derive_seed(seed, 0x6d686331)),
      state_(std::move(init)) {
  kernel_.validate(false);
  kernel_.mode = SamplerMode::MhChain;
  if (log_target_density(target_, state_) == kLogZero)
    throw std::invalid_argument("MhChain: initial state has zero density");
  state_key_ = ordering_key(state_);
}

const MhChain::StateInfo& MhChain::info(const std::string& key, const MolGraph& g) {
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  StateInfo si;
  si.graph = g;
  si.log_density = log_target_density(target_, g);
  for (int op = 0; op < 3; ++op) {
    for (const MovePath& mp :
         enumerate_move_paths(g, static_cast<OpKind>(op), models_, target_,
                              kernel_.proposal))
      si.mass[op][ordering_key(mp.proposal.candidate)] += mp.prob;
  }
  return cache_.emplace(key, std::move(si)).first->second;
}

void MhChain::step() {
  ++steps_;
  const StateInfo& cur = info(state_key_, state_);
  const int n = state_.node_count();

  // draw operation by gamma
  const double u_op = rng_.uniform();
  OpKind op;
  if (u_op < kernel_.gamma_replace) {
    op = OpKind::Replace;
  } else if (u_op < kernel_.gamma_replace + kernel_.gamma_add) {
    op = OpKind::Add;
  } else {
    op = OpKind::Delete;
  }

  // realized proposal draw; infeasible picks self-loop
  MolGraph candidate;
  if (op == OpKind::Replace) {
    const int v = static_cast<int>(rng_.uniform_index(n));
    std::vector<double> yhat = models_.substructure_distribution(state_, v);
    const int s = static_cast<int>(rng_.categorical(yhat));
    auto cand = complete_relabel(state_, v, s, target_, kernel_.proposal);
    if (!cand) return;
    candidate = std::move(*cand);
  } else if (op == OpKind::Add) {
    if (kernel_.proposal.max_nodes > 0 && n >= kernel_.proposal.max_nodes) return;
    const int u = static_cast<int>(rng_.uniform_index(n));
    if (!has_spare_capacity(state_, u, *target_.vocab)) return;
    const double z = models_.expand_probability(state_, u);
    const bool gate = kernel_.proposal.add_gate == AddGate::Bernoulli
                          ? rng_.bernoulli(z)
                          : z >= kernel_.proposal.add_threshold;
    if (!gate) return;
    MolGraph grown = grown_for_prediction(state_, u, 0);
    std::vector<double> yhat =
        models_.substructure_distribution(grown, grown.node_count() - 1);
    const int s = static_cast<int>(rng_.categorical(yhat));
    auto cand = complete_add(state_, u, s, target_, kernel_.proposal);
    if (!cand) return;
    candidate = std::move(*cand);
  } else {
    if (n < 2) return;
    const int v = static_cast<int>(rng_.uniform_index(n));
    if (state_.degree(v) != 1) return;
    candidate = with_removed_node(state_, v);
    if (!generation_valid(candidate, *target_.vocab)) return;
  }

  std::string cand_key = ordering_key(candidate);
  const StateInfo& nxt = info(cand_key, candidate);
  if (nxt.log_density == kLogZero) return;

  double logw;
  if (kernel_.convention == WeightConvention::TextbookMh) {
    // state-level marginal proposal masses
    const auto& fwd = cur.mass[static_cast<int>(op)];
    const auto& rev = nxt.mass[static_cast<int>(reverse_op(op))];
    auto fit = fwd.find(cand_key);
    auto rit = rev.find(state_key_);
    const double q_fwd = fit == fwd.end() ? 0.0 : fit->second;
    const double q_rev = rit == rev.end() ? 0.0 : rit->second;
    if (!(q_fwd > 0.0)) return;  // numerically unreachable draw
    if (!(q_rev > 0.0)) return;  // irreversible; zero flow both ways
    logw = nxt.log_density - cur.log_density + std::log(q_rev) - std::log(q_fwd);
  } else {
    // paper convention needs the realized path's recorded factors; rebuild
    // them through the path enumeration for the drawn candidate
    logw = kLogZero;
    for (const MovePath& mp : enumerate_move_paths(state_, op, models_, target_,
                                                   kernel_.proposal)) {
      if (ordering_key(mp.proposal.candidate) == cand_key) {
        logw = log_weight(kernel_, mp.proposal);
        break;
      }
    }
  }

  if (std::log(rng_.uniform()) < std::min(0.0, logw)) {
    state_ = std::move(candidate);
    state_key_ = std::move(cand_key);
    ++accepts_;
  }
}

MolGraph mh_step(const KernelConfig& kernel, const TargetDistConfig& target,
                 const MolGraph& y, const SubstructureModels& models, Rng& rng) {
  // transient chain seeded from the caller's stream so repeated calls differ
  MhChain chain(kernel, target, models, rng.next(), y);
  chain.step();
  return chain.state();
}

}  // namespace mimosa
