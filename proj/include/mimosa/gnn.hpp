#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mimosa/molgraph.hpp"

namespace mimosa {

// Message-passing network sizes. Input node features are one-hot over
// vocab_size + 1 (the extra slot is the mask token); edge features one-hot
// over the 4 bond types.
struct GnnConfig {
  int vocab_size = 0;   // C1
  int layers = 5;       // K
  int hidden = 300;     // d
  int head_hidden = 50;

  int feature_width() const { return vocab_size + 1; }
  int mask_token() const { return vocab_size; }
};

enum class GnnHead {
  Multinomial,  // mGNN: softmax over C1 substructures
  Expand,       // bGNN: sigmoid expansion probability
};

// Flat parameter vector with a fixed layout:
//   W_in (d x (C1+1)), W_edge (d x C2),
//   per layer: W1 (d x 2d), b1 (d), W2 (d x d), b2 (d),
//   head: H1 (h x d), bh1 (h), H2 (out x h), bh2 (out).
struct GnnParams {
  GnnConfig cfg;
  GnnHead head = GnnHead::Multinomial;
  std::vector<double> theta;

  int head_out() const {
    return head == GnnHead::Multinomial ? cfg.vocab_size : 1;
  }
  std::size_t param_count() const { return theta.size(); }

  // layout offsets
  std::size_t off_w_in() const { return 0; }
  std::size_t off_w_edge() const;
  std::size_t off_layer(int k) const;  // start of layer k block
  std::size_t off_head() const;
};

GnnParams init_params(const GnnConfig& cfg, GnnHead head, std::uint64_t seed);

// K rounds of: concat(sum of neighbor-and-self embeddings, sum of incident
// edge embeddings) -> single-hidden-layer MLP -> ReLU. Returns h^(K) per
// node; `masked_node` (if >= 0) gets the mask token feature.
std::vector<std::vector<double>> gnn_forward(const GnnParams& params,
                                             const MolGraph& g,
                                             int masked_node = -1);

// Mask v, forward, softmax head: probability vector over C1 substructures.
std::vector<double> mgnn_predict(const GnnParams& params, const MolGraph& g, int v);

// Forward without masking, sigmoid head: expansion probability in (0,1).
double bgnn_predict(const GnnParams& params, const MolGraph& g, int v);
std::vector<double> bgnn_predict_all(const GnnParams& params, const MolGraph& g);

// Losses (eps-clamped logs).
double mgnn_loss(const std::vector<double>& yhat, int label);
double bgnn_loss(double zhat, int z);

// Leaves get 0, non-leaf nodes adjacent to a leaf get 1, all other nodes
// are excluded.
std::vector<std::pair<int, int>> make_bgnn_labels(const MolGraph& g);

// One training item: graph index + node + integer target (substructure id
// for mGNN, 0/1 for bGNN).
struct TrainItem {
  int graph;
  int node;
  int target;
};

// Loss plus parameter gradient of a single item, accumulated into grad
// (scaled by `scale`). For mGNN items the node is masked during the
// forward pass; for bGNN it is not.
double item_loss_and_grad(const GnnParams& params, const MolGraph& g,
                          const TrainItem& item, double scale,
                          std::vector<double>& grad);
double item_loss(const GnnParams& params, const MolGraph& g, const TrainItem& item);

// Mean loss and mean gradient over a batch. The parallel variant computes
// per-item gradients concurrently and reduces them in item order, so both
// variants are bit-identical for any thread count.
double batch_loss_and_grad_serial(const GnnParams& params,
                                  const std::vector<MolGraph>& corpus,
                                  const std::vector<TrainItem>& batch,
                                  std::vector<double>& grad);
double batch_loss_and_grad_parallel(const GnnParams& params,
                                    const std::vector<MolGraph>& corpus,
                                    const std::vector<TrainItem>& batch,
                                    std::vector<double>& grad);

struct TrainConfig {
  int batch = 256;
  int epochs = 10;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  bool parallel = true;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

void adam_update(std::vector<double>& theta, const std::vector<double>& grad,
                 AdamState& state, double lr);

struct PretrainResult {
  GnnParams mgnn;
  GnnParams bgnn;
  std::vector<double> mgnn_epoch_loss;
  std::vector<double> bgnn_epoch_loss;
};

// Trains the two networks independently: per epoch each molecule
// contributes one randomly masked node (mGNN) and one randomly chosen
// labeled node (bGNN). Deterministic for a fixed seed.
PretrainResult pretrain(const std::vector<MolGraph>& corpus, const GnnConfig& cfg,
                        const TrainConfig& train);

// Versioned text checkpoint (hexfloat, bit-exact round trip).
void save_checkpoint(const std::string& path, const GnnParams& params);
GnnParams load_checkpoint(const std::string& path);

}  // namespace mimosa
