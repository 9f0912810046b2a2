#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace netab {

using Rng = std::mt19937_64;

/// Independent stream keyed by a master seed and a path of indices, e.g.
/// (seed, beta index, replication index). The same key always yields the
/// same stream regardless of which thread asks for it.
inline Rng derive_stream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * (path.size() + 1));
  auto push = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(master_seed);
  for (std::uint64_t p : path) push(p);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

}  // namespace netab
