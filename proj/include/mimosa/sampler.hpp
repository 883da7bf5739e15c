#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "mimosa/proposal.hpp"

namespace mimosa {

enum class WeightConvention { Paper, TextbookMh };
enum class SamplerMode { MhChain, Population };

struct KernelConfig {
  // operation probabilities (gamma_1, gamma_2, gamma_3)
  double gamma_replace = 0.5;
  double gamma_add = 0.25;
  double gamma_delete = 0.25;
  WeightConvention convention = WeightConvention::TextbookMh;
  SamplerMode mode = SamplerMode::Population;
  ProposalConfig proposal;

  // gammas must sum to 1; gamma_add == gamma_delete is the stationarity
  // condition, enforced only when `require_stationarity` (negative-control
  // runs deliberately break it)
  void validate(bool require_stationarity) const;
};

// Acceptance weights in log space. Throws if the current state's density is
// -inf; +inf is a legal result (always accept).
double log_weight(const KernelConfig& kernel, const Proposal& p);
// Raw weights per operation (exp of the above, with an op check).
double weight_replace(const KernelConfig& kernel, const Proposal& p);
double weight_add(const KernelConfig& kernel, const Proposal& p);
double weight_delete(const KernelConfig& kernel, const Proposal& p);

struct RunConfig {
  int particles = 20;  // N
  int t_max = 10;
  int t_burnin = 5;
  std::uint64_t seed = 0;
  bool parallel = true;

  void validate() const;
};

struct PoolRecord {
  int parent = 0;  // index into the previous Theta
  OpKind op = OpKind::Replace;
  MolGraph graph;
  std::string key;
  double log_density = 0.0;
  double log_weight = 0.0;
  bool accepted = false;
};

struct IterationTrace {
  bool burnin = false;
  std::vector<PoolRecord> pool;
  std::vector<int> selected;      // pool indices drawn into Theta
  double min_selected_density = 0.0;
  std::string warning;
};

struct ChainTrace {
  std::vector<IterationTrace> iterations;
  bool early_stop = false;
};

struct MimosaResult {
  std::vector<MolGraph> phi;       // output set, insertion-ordered, deduplicated
  std::vector<std::string> phi_keys;
  ChainTrace trace;
};

// Per-particle candidate pools with independent derived RNG streams;
// results are bit-identical for any thread count. The serial variant is the
// reference implementation.
std::vector<std::vector<Proposal>> generate_pools(
    const std::vector<MolGraph>& theta, const SubstructureModels& models,
    const TargetDistConfig& target, const ProposalConfig& pcfg,
    std::uint64_t seed, int iter);
std::vector<std::vector<Proposal>> generate_pools_serial(
    const std::vector<MolGraph>& theta, const SubstructureModels& models,
    const TargetDistConfig& target, const ProposalConfig& pcfg,
    std::uint64_t seed, int iter);

// Algorithm-1 population pipeline: per iteration, pool the per-particle
// proposals, then greedy top-N by density during burn-in and systematic
// importance resampling by op-specific weight afterwards.
MimosaResult run_mimosa(const RunConfig& run, const KernelConfig& kernel,
                        const TargetDistConfig& target,
                        const SubstructureModels& models);

// Single-chain MH over canonical molecule states with exact state-level
// proposal masses (memoized); the theory-verification mode.
class MhChain {
 public:
  // starts at target.input unless an explicit initial state is given
  MhChain(const KernelConfig& kernel, const TargetDistConfig& target,
          const SubstructureModels& models, std::uint64_t seed);
  MhChain(const KernelConfig& kernel, const TargetDistConfig& target,
          const SubstructureModels& models, std::uint64_t seed, MolGraph init);

  void step();
  const MolGraph& state() const { return state_; }
  const std::string& state_key() const { return state_key_; }
  long steps() const { return steps_; }
  long accepts() const { return accepts_; }

 private:
  struct StateInfo {
    MolGraph graph;
    double log_density;
    // per op: candidate key -> marginal proposal mass
    std::array<std::map<std::string, double>, 3> mass;
  };
  const StateInfo& info(const std::string& key, const MolGraph& g);

  KernelConfig kernel_;
  const TargetDistConfig& target_;
  const SubstructureModels& models_;
  Rng rng_;
  MolGraph state_;
  std::string state_key_;
  long steps_ = 0;
  long accepts_ = 0;
  std::unordered_map<std::string, StateInfo> cache_;
};

// One transition of the Eq.-13 kernel (draw an operation by gamma, propose,
// accept with min{1, w}); degenerate draws self-loop.
MolGraph mh_step(const KernelConfig& kernel, const TargetDistConfig& target,
                 const MolGraph& y, const SubstructureModels& models, Rng& rng);

}  // namespace mimosa
