#pragma once

#include <memory>
#include <vector>

#include "mimosa/gnn.hpp"
#include "mimosa/molgraph.hpp"

namespace mimosa {

// The pair of predictors the proposal machinery consumes. Implementations
// must be deterministic and safe for concurrent read-only use.
class SubstructureModels {
 public:
  virtual ~SubstructureModels() = default;
  virtual int vocab_size() const = 0;
  // multinomial over substructure types with node v masked
  virtual std::vector<double> substructure_distribution(const MolGraph& g,
                                                        int v) const = 0;
  // probability that node v will expand
  virtual double expand_probability(const MolGraph& g, int v) const = 0;
  virtual std::vector<double> expand_probabilities(const MolGraph& g) const;
};

// Degenerate stand-in: uniform multinomial and constant 0.5. Isolates the
// sampler algebra from learned-model noise in exact checks.
class UniformModels final : public SubstructureModels {
 public:
  explicit UniformModels(int vocab_size) : c1_(vocab_size) {}
  int vocab_size() const override { return c1_; }
  std::vector<double> substructure_distribution(const MolGraph&, int) const override {
    return std::vector<double>(c1_, 1.0 / c1_);
  }
  double expand_probability(const MolGraph&, int) const override { return 0.5; }

 private:
  int c1_;
};

// Trained mGNN + bGNN pair.
class GnnModels final : public SubstructureModels {
 public:
  GnnModels(GnnParams mgnn, GnnParams bgnn);
  int vocab_size() const override { return mgnn_.cfg.vocab_size; }
  std::vector<double> substructure_distribution(const MolGraph& g, int v) const override {
    return mgnn_predict(mgnn_, g, v);
  }
  double expand_probability(const MolGraph& g, int v) const override {
    return bgnn_predict(bgnn_, g, v);
  }
  std::vector<double> expand_probabilities(const MolGraph& g) const override {
    return bgnn_predict_all(bgnn_, g);
  }
  const GnnParams& mgnn() const { return mgnn_; }
  const GnnParams& bgnn() const { return bgnn_; }

 private:
  GnnParams mgnn_;
  GnnParams bgnn_;
};

}  // namespace mimosa
