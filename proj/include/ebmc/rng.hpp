#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ebmc {

using Rng = std::mt19937_64;

// Hand-rolled draws instead of std distributions: the engine sequence is
// fixed by the standard, the distributions are not, and frozen generator
// tests must reproduce across standard libraries.

// uniform over [0, n), rejection sampled
inline std::uint64_t rand_below(Rng& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

inline int rand_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rand_below(
                  rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

// uniform over [0, 1) with 53 random bits
inline double rand_real01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool rand_bernoulli(Rng& rng, double p) {
  return rand_real01(rng) < p;
}

template <typename T>
void shuffle_vec(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = rand_below(rng, i);
    std::swap(v[i - 1], v[j]);
  }
}

// first k entries of a Fisher-Yates pass over [0, n)
inline std::vector<int> sample_without_replacement(Rng& rng, int n, int k) {
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rand_below(
                          rng, static_cast<std::uint64_t>(n - i)));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

// deterministic per-task seed derivation (splitmix64 over the combined key)
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace ebmc
