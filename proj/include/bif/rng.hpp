#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace bif {

// Derives a stream seed from a base seed and a fixed label, so that one run
// seed drives several independent sub-streams (initialization sampling,
// environment noise, pretraining, ...).
inline std::uint64_t mix_seed(std::uint64_t base, std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ base;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  // splitmix64 finalizer
  h += 0x9e3779b97f4a7c15ULL;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
  return h ^ (h >> 31);
}

inline std::mt19937_64 derive_rng(std::uint64_t base, std::string_view label) {
  return std::mt19937_64(mix_seed(base, label));
}

// Draws `r` distinct integers from [0, n) by partial Fisher-Yates shuffle.
inline std::vector<int> sample_distinct(int n, int r, std::mt19937_64& rng) {
  if (r < 0 || r > n) throw std::invalid_argument("sample_distinct: r out of range");
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  for (int i = 0; i < r; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(r);
  return pool;
}

}  // namespace bif
