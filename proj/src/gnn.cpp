#include "mimosa/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mimosa/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mimosa {

namespace {

constexpr double kLogEps = 1e-12;

// y = W x + b (W row-major rows x cols); fixed summation order
void affine(const double* W, const double* b, const double* x, double* y,
            int rows, int cols) {
  for (int r = 0; r < rows; ++r) {
    double acc = b ? b[r] : 0.0;
    const double* row = W + static_cast<std::size_t>(r) * cols;
    for (int c = 0; c < cols; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
}

// dW += gy x^T, db += gy
void accumulate_affine_grad(double* dW, double* db, const double* gy,
                            const double* x, int rows, int cols) {
  for (int r = 0; r < rows; ++r) {
    double* row = dW + static_cast<std::size_t>(r) * cols;
    const double gr = gy[r];
    for (int c = 0; c < cols; ++c) row[c] += gr * x[c];
    if (db) db[r] += gr;
  }
}

// dx += W^T gy
void accumulate_input_grad(const double* W, const double* gy, double* dx,
                           int rows, int cols) {
  for (int r = 0; r < rows; ++r) {
    const double* row = W + static_cast<std::size_t>(r) * cols;
    const double gr = gy[r];
    for (int c = 0; c < cols; ++c) dx[c] += row[c] * gr;
  }
}

void relu_inplace(double* x, int n) {
  for (int i = 0; i < n; ++i)
    if (x[i] < 0.0) x[i] = 0.0;
}

}  // namespace

std::size_t GnnParams::off_w_edge() const {
  return static_cast<std::size_t>(cfg.hidden) * cfg.feature_width();
}

std::size_t GnnParams::off_layer(int k) const {
  const std::size_t d = cfg.hidden;
  const std::size_t per_layer = d * 2 * d + d + d * d + d;
  return off_w_edge() + d * kBondTypeCount + k * per_layer;
}

std::size_t GnnParams::off_head() const { return off_layer(cfg.layers); }

namespace {

std::size_t total_params(const GnnConfig& cfg, GnnHead head) {
  const std::size_t d = cfg.hidden;
  const std::size_t h = cfg.head_hidden;
  const std::size_t out = head == GnnHead::Multinomial ? cfg.vocab_size : 1;
  return d * cfg.feature_width() + d * kBondTypeCount +
         cfg.layers * (d * 2 * d + d + d * d + d) + h * d + h + out * h + out;
}

}  // namespace

GnnParams init_params(const GnnConfig& cfg, GnnHead head, std::uint64_t seed) {
  if (cfg.vocab_size < 1 || cfg.layers < 1 || cfg.hidden < 1 || cfg.head_hidden < 1)
    throw std::invalid_argument("bad GNN configuration");
  GnnParams p;
  p.cfg = cfg;
  p.head = head;
  p.theta.assign(total_params(cfg, head), 0.0);
  Rng rng(derive_seed(seed, 0x676e6e, static_cast<std::uint64_t>(head)));
  const int d = cfg.hidden;

  auto glorot = [&](std::size_t off, int rows, int cols) {
    const double s = std::sqrt(6.0 / (rows + cols));
    for (std::size_t i = 0; i < static_cast<std::size_t>(rows) * cols; ++i)
      p.theta[off + i] = rng.uniform_signed(s);
  };

  glorot(p.off_w_in(), d, cfg.feature_width());
  glorot(p.off_w_edge(), d, kBondTypeCount);
  for (int k = 0; k < cfg.layers; ++k) {
    std::size_t off = p.off_layer(k);
    glorot(off, d, 2 * d);                              // W1
    glorot(off + static_cast<std::size_t>(d) * 2 * d + d, d, d);  // W2
  }
  std::size_t off = p.off_head();
  glorot(off, cfg.head_hidden, d);
  glorot(off + static_cast<std::size_t>(cfg.head_hidden) * d + cfg.head_hidden,
         p.head_out(), cfg.head_hidden);
  return p;
}

namespace {

struct LayerView {
  const double* w1;
  const double* b1;
  const double* w2;
  const double* b2;
};

struct HeadView {
  const double* h1;
  const double* bh1;
  const double* h2;
  const double* bh2;
};

LayerView layer_view(const GnnParams& p, int k) {
  const std::size_t d = p.cfg.hidden;
  const double* base = p.theta.data() + p.off_layer(k);
  return {base, base + d * 2 * d, base + d * 2 * d + d, base + d * 2 * d + d + d * d};
}

HeadView head_view(const GnnParams& p) {
  const std::size_t d = p.cfg.hidden;
  const std::size_t h = p.cfg.head_hidden;
  const double* base = p.theta.data() + p.off_head();
  return {base, base + h * d, base + h * d + h, base + h * d + h + h * p.head_out()};
}

struct MutLayerView {
  double* w1;
  double* b1;
  double* w2;
  double* b2;
};

MutLayerView layer_view_mut(const GnnParams& p, std::vector<double>& grad, int k) {
  const std::size_t d = p.cfg.hidden;
  double* base = grad.data() + p.off_layer(k);
  return {base, base + d * 2 * d, base + d * 2 * d + d, base + d * 2 * d + d + d * d};
}

// forward caches per layer
struct ForwardCache {
  // level 0..K node embeddings
  std::vector<std::vector<std::vector<double>>> h;
  // per layer 0..K-1: x (2d), pre1 (d), a1 (d), pre2 (d)
  std::vector<std::vector<std::vector<double>>> x, pre1, a1, pre2;
  // per node: summed incident edge embedding (constant across layers)
  std::vector<std::vector<double>> edge_sum;
};

int node_feature(const GnnParams& p, const MolGraph& g, int masked, int v) {
  if (v == masked) return p.cfg.mask_token();
  const int lbl = g.label(v);
  if (lbl >= p.cfg.vocab_size)
    throw std::invalid_argument("node label out of range for GNN vocab size");
  return lbl;
}

void forward_cached(const GnnParams& p, const MolGraph& g, int masked,
                    ForwardCache& fc) {
  const int n = g.node_count();
  const int d = p.cfg.hidden;
  const int K = p.cfg.layers;
  fc.h.assign(K + 1, std::vector<std::vector<double>>(n, std::vector<double>(d)));
  fc.x.assign(K, std::vector<std::vector<double>>(n, std::vector<double>(2 * d)));
  fc.pre1.assign(K, std::vector<std::vector<double>>(n, std::vector<double>(d)));
  fc.a1.assign(K, std::vector<std::vector<double>>(n, std::vector<double>(d)));
  fc.pre2.assign(K, std::vector<std::vector<double>>(n, std::vector<double>(d)));
  fc.edge_sum.assign(n, std::vector<double>(d, 0.0));

  const double* w_in = p.theta.data() + p.off_w_in();
  const double* w_edge = p.theta.data() + p.off_w_edge();
  const int fw = p.cfg.feature_width();

  for (int v = 0; v < n; ++v) {
    const int f = node_feature(p, g, masked, v);
    for (int i = 0; i < d; ++i)
      fc.h[0][v][i] = w_in[static_cast<std::size_t>(i) * fw + f];
    for (const auto& [u, b] : g.neighbors(v)) {
      const int bi = static_cast<int>(b);
      for (int i = 0; i < d; ++i)
        fc.edge_sum[v][i] += w_edge[static_cast<std::size_t>(i) * kBondTypeCount + bi];
    }
  }

  for (int k = 0; k < K; ++k) {
    LayerView lv = layer_view(p, k);
    for (int v = 0; v < n; ++v) {
      auto& x = fc.x[k][v];
      // self + neighbor sum
      for (int i = 0; i < d; ++i) x[i] = fc.h[k][v][i];
      for (const auto& [u, b] : g.neighbors(v))
        for (int i = 0; i < d; ++i) x[i] += fc.h[k][u][i];
      for (int i = 0; i < d; ++i) x[d + i] = fc.edge_sum[v][i];

      affine(lv.w1, lv.b1, x.data(), fc.pre1[k][v].data(), d, 2 * d);
      fc.a1[k][v] = fc.pre1[k][v];
      relu_inplace(fc.a1[k][v].data(), d);
      affine(lv.w2, lv.b2, fc.a1[k][v].data(), fc.pre2[k][v].data(), d, d);
      fc.h[k + 1][v] = fc.pre2[k][v];
      relu_inplace(fc.h[k + 1][v].data(), d);
    }
  }
}

std::vector<double> head_logits(const GnnParams& p, const std::vector<double>& hv,
                                std::vector<double>* a1_out = nullptr,
                                std::vector<double>* pre1_out = nullptr) {
  HeadView hv_w = head_view(p);
  const int d = p.cfg.hidden;
  const int h = p.cfg.head_hidden;
  const int out = p.head_out();
  std::vector<double> pre1(h), a1;
  affine(hv_w.h1, hv_w.bh1, hv.data(), pre1.data(), h, d);
  a1 = pre1;
  relu_inplace(a1.data(), h);
  std::vector<double> logits(out);
  affine(hv_w.h2, hv_w.bh2, a1.data(), logits.data(), out, h);
  if (a1_out) *a1_out = std::move(a1);
  if (pre1_out) *pre1_out = std::move(pre1);
  return logits;
}

std::vector<double> softmax(std::vector<double> logits) {
  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  double total = 0.0;
  for (double& v : logits) {
    v = std::exp(v - mx);
    total += v;
  }
  for (double& v : logits) v /= total;
  return logits;
}

}  // namespace

std::vector<std::vector<double>> gnn_forward(const GnnParams& params,
                                             const MolGraph& g, int masked_node) {
  ForwardCache fc;
  forward_cached(params, g, masked_node, fc);
  return fc.h.back();
}

std::vector<double> mgnn_predict(const GnnParams& params, const MolGraph& g, int v) {
  if (params.head != GnnHead::Multinomial)
    throw std::invalid_argument("mgnn_predict called on non-multinomial head");
  if (v < 0 || v >= g.node_count()) throw std::out_of_range("mgnn_predict node");
  ForwardCache fc;
  forward_cached(params, g, v, fc);
  return softmax(head_logits(params, fc.h.back()[v]));
}

double bgnn_predict(const GnnParams& params, const MolGraph& g, int v) {
  if (params.head != GnnHead::Expand)
    throw std::invalid_argument("bgnn_predict called on non-expand head");
  if (v < 0 || v >= g.node_count()) throw std::out_of_range("bgnn_predict node");
  ForwardCache fc;
  forward_cached(params, g, -1, fc);
  return 1.0 / (1.0 + std::exp(-head_logits(params, fc.h.back()[v])[0]));
}

std::vector<double> bgnn_predict_all(const GnnParams& params, const MolGraph& g) {
  if (params.head != GnnHead::Expand)
    throw std::invalid_argument("bgnn_predict_all called on non-expand head");
  ForwardCache fc;
  forward_cached(params, g, -1, fc);
  std::vector<double> out(g.node_count());
  for (int v = 0; v < g.node_count(); ++v)
    out[v] = 1.0 / (1.0 + std::exp(-head_logits(params, fc.h.back()[v])[0]));
  return out;
}

double mgnn_loss(const std::vector<double>& yhat, int label) {
  return -std::log(std::max(yhat.at(label), kLogEps));
}

double bgnn_loss(double zhat, int z) {
  if (z != 0 && z != 1) throw std::invalid_argument("bgnn_loss: z must be 0 or 1");
  const double p = z == 1 ? zhat : 1.0 - zhat;
  return -std::log(std::max(p, kLogEps));
}

std::vector<std::pair<int, int>> make_bgnn_labels(const MolGraph& g) {
  std::vector<std::pair<int, int>> out;
  for (int v = 0; v < g.node_count(); ++v) {
    if (g.degree(v) == 1) {
      out.emplace_back(v, 0);
    } else {
      bool leaf_adjacent = false;
      for (const auto& [u, b] : g.neighbors(v))
        if (g.degree(u) == 1) leaf_adjacent = true;
      if (leaf_adjacent) out.emplace_back(v, 1);
    }
  }
  return out;
}

double item_loss_and_grad(const GnnParams& params, const MolGraph& g,
                          const TrainItem& item, double scale,
                          std::vector<double>& grad) {
  if (grad.size() != params.theta.size())
    throw std::invalid_argument("gradient buffer size mismatch");
  const int d = params.cfg.hidden;
  const int K = params.cfg.layers;
  const int n = g.node_count();
  const int hdim = params.cfg.head_hidden;
  const int out = params.head_out();
  const bool multinomial = params.head == GnnHead::Multinomial;
  const int masked = multinomial ? item.node : -1;

  ForwardCache fc;
  forward_cached(params, g, masked, fc);

  std::vector<double> head_a1, head_pre1;
  std::vector<double> logits =
      head_logits(params, fc.h.back()[item.node], &head_a1, &head_pre1);

  double loss;
  std::vector<double> dlogits(out);
  if (multinomial) {
    std::vector<double> y = softmax(logits);
    loss = mgnn_loss(y, item.target);
    for (int i = 0; i < out; ++i) dlogits[i] = (y[i] - (i == item.target ? 1.0 : 0.0)) * scale;
  } else {
    const double z = 1.0 / (1.0 + std::exp(-logits[0]));
    loss = bgnn_loss(z, item.target);
    dlogits[0] = (z - item.target) * scale;
  }

  // head backward
  HeadView hw = head_view(params);
  double* gbase = grad.data() + params.off_head();
  double* gH1 = gbase;
  double* gbh1 = gbase + static_cast<std::size_t>(hdim) * d;
  double* gH2 = gbh1 + hdim;
  double* gbh2 = gH2 + static_cast<std::size_t>(out) * hdim;
  accumulate_affine_grad(gH2, gbh2, dlogits.data(), head_a1.data(), out, hdim);
  std::vector<double> da1(hdim, 0.0);
  accumulate_input_grad(hw.h2, dlogits.data(), da1.data(), out, hdim);
  for (int i = 0; i < hdim; ++i)
    if (head_pre1[i] <= 0.0) da1[i] = 0.0;
  accumulate_affine_grad(gH1, gbh1, da1.data(), fc.h.back()[item.node].data(), hdim, d);

  std::vector<std::vector<double>> dh(n, std::vector<double>(d, 0.0));
  accumulate_input_grad(hw.h1, da1.data(), dh[item.node].data(), hdim, d);

  // layers backward
  double* g_edge = grad.data() + params.off_w_edge();
  for (int k = K - 1; k >= 0; --k) {
    LayerView lv = layer_view(params, k);
    MutLayerView gv = layer_view_mut(params, grad, k);
    std::vector<std::vector<double>> dh_prev(n, std::vector<double>(d, 0.0));
    std::vector<double> g2(d), g1(d), dx(2 * d);
    for (int v = 0; v < n; ++v) {
      bool all_zero = true;
      for (int i = 0; i < d; ++i)
        if (dh[v][i] != 0.0) {
          all_zero = false;
          break;
        }
      if (all_zero) continue;
      for (int i = 0; i < d; ++i)
        g2[i] = fc.pre2[k][v][i] > 0.0 ? dh[v][i] : 0.0;
      accumulate_affine_grad(gv.w2, gv.b2, g2.data(), fc.a1[k][v].data(), d, d);
      std::fill(g1.begin(), g1.end(), 0.0);
      accumulate_input_grad(lv.w2, g2.data(), g1.data(), d, d);
      for (int i = 0; i < d; ++i)
        if (fc.pre1[k][v][i] <= 0.0) g1[i] = 0.0;
      accumulate_affine_grad(gv.w1, gv.b1, g1.data(), fc.x[k][v].data(), d, 2 * d);
      std::fill(dx.begin(), dx.end(), 0.0);
      accumulate_input_grad(lv.w1, g1.data(), dx.data(), d, 2 * d);
      // message part flows to self and neighbors at level k
      for (int i = 0; i < d; ++i) dh_prev[v][i] += dx[i];
      for (const auto& [u, b] : g.neighbors(v))
        for (int i = 0; i < d; ++i) dh_prev[u][i] += dx[i];
      // edge part accumulates into the (layer-shared) edge embedding
      for (const auto& [u, b] : g.neighbors(v)) {
        const int bi = static_cast<int>(b);
        for (int i = 0; i < d; ++i)
          g_edge[static_cast<std::size_t>(i) * kBondTypeCount + bi] += dx[d + i];
      }
    }
    dh = std::move(dh_prev);
  }

  // input embedding
  double* g_in = grad.data() + params.off_w_in();
  const int fw = params.cfg.feature_width();
  for (int v = 0; v < n; ++v) {
    const int f = node_feature(params, g, masked, v);
    for (int i = 0; i < d; ++i)
      g_in[static_cast<std::size_t>(i) * fw + f] += dh[v][i];
  }

  return loss;
}

double item_loss(const GnnParams& params, const MolGraph& g, const TrainItem& item) {
  if (params.head == GnnHead::Multinomial) {
    return mgnn_loss(mgnn_predict(params, g, item.node), item.target);
  }
  return bgnn_loss(bgnn_predict(params, g, item.node), item.target);
}

double batch_loss_and_grad_serial(const GnnParams& params,
                                  const std::vector<MolGraph>& corpus,
                                  const std::vector<TrainItem>& batch,
                                  std::vector<double>& grad) {
  grad.assign(params.theta.size(), 0.0);
  if (batch.empty()) return 0.0;
  const double scale = 1.0 / batch.size();
  double loss = 0.0;
  std::vector<double> item_grad(params.theta.size());
  for (const TrainItem& item : batch) {
    std::fill(item_grad.begin(), item_grad.end(), 0.0);
    loss += item_loss_and_grad(params, corpus.at(item.graph), item, scale, item_grad);
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += item_grad[i];
  }
  return loss * scale;
}

double batch_loss_and_grad_parallel(const GnnParams& params,
                                    const std::vector<MolGraph>& corpus,
                                    const std::vector<TrainItem>& batch,
                                    std::vector<double>& grad) {
  grad.assign(params.theta.size(), 0.0);
  if (batch.empty()) return 0.0;
  const double scale = 1.0 / batch.size();
  const int b = static_cast<int>(batch.size());
  // fixed chunk size bounds the per-item buffer memory; chunking does not
  // affect results because per-item gradients are reduced in item order
  constexpr int kChunk = 8;
  std::vector<std::vector<double>> item_grads(std::min(b, kChunk));
  for (auto& ig : item_grads) ig.assign(params.theta.size(), 0.0);
  std::vector<double> losses(item_grads.size(), 0.0);
  double loss = 0.0;
  for (int start = 0; start < b; start += kChunk) {
    const int len = std::min(kChunk, b - start);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < len; ++i) {
      std::fill(item_grads[i].begin(), item_grads[i].end(), 0.0);
      losses[i] = item_loss_and_grad(params, corpus.at(batch[start + i].graph),
                                     batch[start + i], scale, item_grads[i]);
    }
    for (int i = 0; i < len; ++i) {
      loss += losses[i];
      for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += item_grads[i][j];
    }
  }
  return loss * scale;
}

void adam_update(std::vector<double>& theta, const std::vector<double>& grad,
                 AdamState& state, double lr) {
  if (state.m.empty()) {
    state.m.assign(theta.size(), 0.0);
    state.v.assign(theta.size(), 0.0);
  }
  if (state.m.size() != theta.size() || grad.size() != theta.size())
    throw std::invalid_argument("adam_update: size mismatch");
  ++state.step;
  const double bc1 = 1.0 - std::pow(state.beta1, state.step);
  const double bc2 = 1.0 - std::pow(state.beta2, state.step);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grad[i];
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grad[i] * grad[i];
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    theta[i] -= lr * mhat / (std::sqrt(vhat) + state.eps);
  }
}

namespace {

double train_one(GnnParams& params, const std::vector<MolGraph>& corpus,
                 const std::vector<TrainItem>& items, const TrainConfig& cfg,
                 AdamState& adam, std::vector<double>& grad) {
  double epoch_loss = 0.0;
  std::size_t count = 0;
  for (std::size_t start = 0; start < items.size(); start += cfg.batch) {
    std::vector<TrainItem> batch(
        items.begin() + start,
        items.begin() + std::min(items.size(), start + cfg.batch));
    const double loss =
        cfg.parallel ? batch_loss_and_grad_parallel(params, corpus, batch, grad)
                     : batch_loss_and_grad_serial(params, corpus, batch, grad);
    adam_update(params.theta, grad, adam, cfg.lr);
    epoch_loss += loss * batch.size();
    count += batch.size();
  }
  return count ? epoch_loss / count : 0.0;
}

}  // namespace

PretrainResult pretrain(const std::vector<MolGraph>& corpus, const GnnConfig& cfg,
                        const TrainConfig& train) {
  if (corpus.empty()) throw std::invalid_argument("pretrain: empty corpus");
  PretrainResult res;
  res.mgnn = init_params(cfg, GnnHead::Multinomial, derive_seed(train.seed, 1));
  res.bgnn = init_params(cfg, GnnHead::Expand, derive_seed(train.seed, 2));
  AdamState adam_m, adam_b;
  Rng rng(derive_seed(train.seed, 3));
  std::vector<double> grad;

  // labeled nodes per molecule for bGNN, computed once
  std::vector<std::vector<std::pair<int, int>>> bgnn_labels;
  bgnn_labels.reserve(corpus.size());
  for (const auto& g : corpus) bgnn_labels.push_back(make_bgnn_labels(g));

  for (int epoch = 0; epoch < train.epochs; ++epoch) {
    // one random masked node per molecule
    std::vector<TrainItem> mgnn_items;
    mgnn_items.reserve(corpus.size());
    for (std::size_t gi = 0; gi < corpus.size(); ++gi) {
      const int v = static_cast<int>(rng.uniform_index(corpus[gi].node_count()));
      mgnn_items.push_back({static_cast<int>(gi), v, corpus[gi].label(v)});
    }
    rng.shuffle(mgnn_items);
    res.mgnn_epoch_loss.push_back(
        train_one(res.mgnn, corpus, mgnn_items, train, adam_m, grad));

    // one random labeled node per molecule
    std::vector<TrainItem> bgnn_items;
    bgnn_items.reserve(corpus.size());
    for (std::size_t gi = 0; gi < corpus.size(); ++gi) {
      const auto& labels = bgnn_labels[gi];
      if (labels.empty()) continue;
      const auto& [node, z] = labels[rng.uniform_index(labels.size())];
      bgnn_items.push_back({static_cast<int>(gi), node, z});
    }
    rng.shuffle(bgnn_items);
    res.bgnn_epoch_loss.push_back(
        train_one(res.bgnn, corpus, bgnn_items, train, adam_b, grad));
  }
  return res;
}

void save_checkpoint(const std::string& path, const GnnParams& params) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out << "mimosa-gnn-checkpoint v1\n";
  out << "head " << (params.head == GnnHead::Multinomial ? "mgnn" : "bgnn") << "\n";
  out << "vocab_size " << params.cfg.vocab_size << "\n";
  out << "layers " << params.cfg.layers << "\n";
  out << "hidden " << params.cfg.hidden << "\n";
  out << "head_hidden " << params.cfg.head_hidden << "\n";
  out << "params " << params.theta.size() << "\n";
  char buf[64];
  for (double v : params.theta) {
    std::snprintf(buf, sizeof buf, "%a\n", v);
    out << buf;
  }
  if (!out) throw std::runtime_error("failed while writing checkpoint: " + path);
}

GnnParams load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  std::string line;
  std::getline(in, line);
  if (line != "mimosa-gnn-checkpoint v1")
    throw std::runtime_error(path + ": not a v1 checkpoint");
  GnnParams p;
  std::size_t count = 0;
  for (int i = 0; i < 6; ++i) {
    std::string key;
    in >> key;
    if (key == "head") {
      std::string h;
      in >> h;
      p.head = h == "mgnn" ? GnnHead::Multinomial : GnnHead::Expand;
    } else if (key == "vocab_size") {
      in >> p.cfg.vocab_size;
    } else if (key == "layers") {
      in >> p.cfg.layers;
    } else if (key == "hidden") {
      in >> p.cfg.hidden;
    } else if (key == "head_hidden") {
      in >> p.cfg.head_hidden;
    } else if (key == "params") {
      in >> count;
    } else {
      throw std::runtime_error(path + ": unexpected checkpoint field " + key);
    }
  }
  if (count != total_params(p.cfg, p.head))
    throw std::runtime_error(path + ": parameter count mismatch");
  p.theta.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string tok;
    if (!(in >> tok)) throw std::runtime_error(path + ": truncated checkpoint");
    p.theta[i] = std::strtod(tok.c_str(), nullptr);
  }
  return p;
}

}  // namespace mimosa
