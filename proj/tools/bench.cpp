// Timings of the OpenMP kernels against their serial reference
// implementations, with bit-equality checks.

#include <chrono>
#include <cstdio>
#include <vector>

#include "mimosa/corpus.hpp"
#include "mimosa/gnn.hpp"
#include "mimosa/models.hpp"
#include "mimosa/oracle.hpp"
#include "mimosa/parallel.hpp"
#include "mimosa/sampler.hpp"

using namespace mimosa;

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = Clock::now();
    fn();
    best = std::min(best,
                    std::chrono::duration<double>(Clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial_s, double parallel_s, bool equal) {
  std::printf("%-28s serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx   %s\n",
              name, serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s,
              equal ? "bit-equal" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("threads available: %d (OpenMP %s)\n\n", parallel::max_threads(),
              parallel::available() ? "on" : "off");

  auto vocab = std::make_shared<SubstructureVocab>(SubstructureVocab::desk_default());

  // 1. batch gradient accumulation
  {
    SyntheticCorpusConfig ccfg;
    ccfg.count = 512;
    std::vector<MolGraph> corpus = synthetic_rule_corpus(ccfg, *vocab);
    GnnConfig gcfg;
    gcfg.vocab_size = vocab->size();
    gcfg.layers = 3;
    gcfg.hidden = 64;
    gcfg.head_hidden = 32;
    GnnParams params = init_params(gcfg, GnnHead::Multinomial, 7);
    std::vector<TrainItem> batch;
    for (int i = 0; i < 256; ++i)
      batch.push_back({i % static_cast<int>(corpus.size()), 0,
                       corpus[i % corpus.size()].label(0)});
    std::vector<double> gs, gp;
    const double ts = time_best_of(
        3, [&] { batch_loss_and_grad_serial(params, corpus, batch, gs); });
    const double tp = time_best_of(
        3, [&] { batch_loss_and_grad_parallel(params, corpus, batch, gp); });
    report("gnn batch gradient", ts, tp, gs == gp);
  }

  // 2. exact transition matrix rows
  {
    auto sub = std::make_shared<SubstructureVocab>(
        vocab->subset({"C", "N", "O"}));
    KernelConfig kernel;
    kernel.proposal.allowed_bonds = {BondType::Single};
    kernel.proposal.max_nodes = 4;
    UniformModels models(sub->size());
    TargetDistConfig target =
        make_target(sub, MolGraph({sub->require("C")}, {}), {1.0}, {});
    StateSpace space = enumerate_states(sub, 4, kernel, target, models);
    std::printf("  (state space: %d states)\n", space.size());
    TransitionMatrix ms, mp;
    const double ts = time_best_of(3, [&] {
      ms = build_transition_matrix_serial(space, kernel, target, models);
    });
    const double tp = time_best_of(
        3, [&] { mp = build_transition_matrix(space, kernel, target, models); });
    report("transition matrix", ts, tp, ms.a == mp.a);
  }

  // 3. per-particle pool generation
  {
    SyntheticCorpusConfig ccfg;
    ccfg.count = 64;
    ccfg.min_nodes = 8;
    ccfg.max_nodes = 12;
    std::vector<MolGraph> theta = synthetic_rule_corpus(ccfg, *vocab);
    GnnConfig gcfg;
    gcfg.vocab_size = vocab->size();
    gcfg.layers = 3;
    gcfg.hidden = 64;
    gcfg.head_hidden = 32;
    GnnModels models(init_params(gcfg, GnnHead::Multinomial, 11),
                     init_params(gcfg, GnnHead::Expand, 12));
    TargetDistConfig target = make_target(vocab, theta[0], {1.0}, {});
    ProposalConfig pcfg;
    auto equal_pools = [](const std::vector<std::vector<Proposal>>& a,
                          const std::vector<std::vector<Proposal>>& b) {
      if (a.size() != b.size()) return false;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) return false;
        for (std::size_t j = 0; j < a[i].size(); ++j)
          if (!(a[i][j].candidate == b[i][j].candidate) ||
              a[i][j].q_fwd != b[i][j].q_fwd || a[i][j].q_rev != b[i][j].q_rev)
            return false;
      }
      return true;
    };
    std::vector<std::vector<Proposal>> ps, pp;
    const double ts = time_best_of(
        3, [&] { ps = generate_pools_serial(theta, models, target, pcfg, 5, 0); });
    const double tp = time_best_of(
        3, [&] { pp = generate_pools(theta, models, target, pcfg, 5, 0); });
    report("proposal pools", ts, tp, equal_pools(ps, pp));
  }

  return 0;
}
