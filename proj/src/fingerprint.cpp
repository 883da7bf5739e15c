#include "mimosa/fingerprint.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "mimosa/rng.hpp"

namespace mimosa {

Fingerprint::Fingerprint(int width) : width_(width) {
  if (width <= 0 || (width & (width - 1)) != 0)
    throw std::invalid_argument("fingerprint width must be a positive power of two");
  blocks_.assign((width + 63) / 64, 0);
}

bool Fingerprint::test(int bit) const {
  return (blocks_.at(bit / 64) >> (bit % 64)) & 1ULL;
}

void Fingerprint::set(int bit) {
  if (bit < 0 || bit >= width_) throw std::out_of_range("fingerprint bit");
  if (!test(bit)) {
    blocks_[bit / 64] |= (1ULL << (bit % 64));
    ++set_count_;
  }
}

namespace {

// Tree-unfolded environment string of radius r rooted at v: label plus the
// sorted list of (bond, child environment at r-1) over neighbors.
std::string environment(const MolGraph& g, int v, int r) {
  std::string s = std::to_string(g.label(v));
  if (r == 0) return s;
  std::vector<std::string> parts;
  for (const auto& [u, b] : g.neighbors(v))
    parts.push_back(std::string(1, static_cast<char>('0' + static_cast<int>(b))) +
                    environment(g, u, r - 1));
  std::sort(parts.begin(), parts.end());
  s += '(';
  for (const auto& p : parts) {
    s += p;
    s += ',';
  }
  s += ')';
  return s;
}

}  // namespace

Fingerprint fingerprint(const MolGraph& g, int radius, int width) {
  Fingerprint fp(width);
  for (int v = 0; v < g.node_count(); ++v) {
    for (int r = 0; r <= radius; ++r) {
      std::string env = std::to_string(r) + "@" + environment(g, v, r);
      fp.set(static_cast<int>(fnv1a64(env) & static_cast<std::uint64_t>(width - 1)));
    }
  }
  return fp;
}

double tanimoto(const Fingerprint& a, const Fingerprint& b) {
  if (a.width() != b.width())
    throw std::invalid_argument("tanimoto: fingerprint width mismatch");
  std::int64_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.blocks().size(); ++i) {
    inter += std::popcount(a.blocks()[i] & b.blocks()[i]);
    uni += std::popcount(a.blocks()[i] | b.blocks()[i]);
  }
  if (uni == 0) return 1.0;  // two empty sets are identical
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace mimosa
