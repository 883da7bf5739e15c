#pragma once

#include <cstdint>
#include <vector>

#include "mimosa/molgraph.hpp"

namespace mimosa {

// Fixed-width binary fragment-descriptor fingerprint.
class Fingerprint {
 public:
  explicit Fingerprint(int width = 2048);

  int width() const { return width_; }
  int set_count() const { return set_count_; }
  bool test(int bit) const;
  void set(int bit);
  const std::vector<std::uint64_t>& blocks() const { return blocks_; }

 private:
  int width_ = 0;
  int set_count_ = 0;
  std::vector<std::uint64_t> blocks_;
};

// Circular substructure-environment fingerprint: for each node and each
// radius r in 0..radius, the canonically serialized r-neighborhood (labels +
// bond types, neighbor-sorted) hashes to one bit (64-bit FNV-1a masked to
// width). Deterministic and isomorphism-invariant.
Fingerprint fingerprint(const MolGraph& g, int radius = 2, int width = 2048);

// |a intersect b| / |a union b|; 0/0 -> 1.0. Throws on width mismatch.
double tanimoto(const Fingerprint& a, const Fingerprint& b);

}  // namespace mimosa
