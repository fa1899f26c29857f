#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace topsteer {

/// Independent generator stream keyed by a tuple of integers, e.g.
/// (master seed, iteration, candidate).
inline std::mt19937_64 make_stream(std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> words;
  words.reserve(keys.size() * 2);
  for (std::uint64_t k : keys) {
    words.push_back(static_cast<std::uint32_t>(k & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

/// splitmix64 finalizer; used to derive child seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) {
  return mix_seed(parent ^ mix_seed(tag + 0x632be59bd9b4e019ull));
}

}  // namespace topsteer
