#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace mimosa {

// splitmix64; used for seed derivation and stable hashing of seed tuples.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = splitmix64(seed ^ 0x6d696d6f'73610000ULL);
  s = splitmix64(s ^ a);
  s = splitmix64(s ^ b);
  return splitmix64(s ^ c);
}

// FNV-1a over bytes; stable across platforms, used for fingerprint bits and
// config manifests.
inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s) {
  return fnv1a64(s.data(), s.size());
}

// mt19937_64 with hand-rolled draw helpers. The standard distributions are
// not bit-stable across library implementations, so every draw we use is
// implemented here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : eng_(splitmix64(seed)) {}

  std::uint64_t next() { return eng_(); }

  // uniform in [0,1) with 53 random bits
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n)
  std::size_t uniform_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be > 0");
    // rejection sampling to avoid modulo bias
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // index from an unnormalized nonnegative weight vector
  std::size_t categorical(const std::vector<double>& w) {
    double total = 0.0;
    for (double x : w) total += x;
    if (!(total > 0.0)) throw std::invalid_argument("categorical: zero mass");
    double u = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      acc += w[i];
      if (u < acc) return i;
    }
    return w.size() - 1;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // uniform in (-s, s); used for parameter init
  double uniform_signed(double s) { return (2.0 * uniform() - 1.0) * s; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace mimosa
