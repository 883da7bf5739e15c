#include "mimosa/models.hpp"

#include <stdexcept>

namespace mimosa {

std::vector<double> SubstructureModels::expand_probabilities(const MolGraph& g) const {
  std::vector<double> out(g.node_count());
  for (int v = 0; v < g.node_count(); ++v) out[v] = expand_probability(g, v);
  return out;
}

GnnModels::GnnModels(GnnParams mgnn, GnnParams bgnn)
    : mgnn_(std::move(mgnn)), bgnn_(std::move(bgnn)) {
  if (mgnn_.head != GnnHead::Multinomial || bgnn_.head != GnnHead::Expand)
    throw std::invalid_argument("GnnModels: heads are swapped");
  if (mgnn_.cfg.vocab_size != bgnn_.cfg.vocab_size)
    throw std::invalid_argument("GnnModels: vocab size mismatch");
}

}  // namespace mimosa
