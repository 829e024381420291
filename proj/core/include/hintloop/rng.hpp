#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace hintloop {

// All randomness in the library flows through this generator. std::mt19937_64
// is seeded with derived streams and sampled through our own helpers instead
// of std distributions, so identical seeds give identical results on every
// platform and under any call interleaving.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();

  // Uniform in [0, 1).
  double uniform01();

  // Uniform in [lo, hi).
  double uniform(double lo, double hi);

  // Uniform integer in [0, n). n must be > 0.
  std::size_t uniform_index(std::size_t n);

  // Index sampled from an unnormalized non-negative weight vector.
  std::size_t weighted_index(const std::vector<double>& weights);

 private:
  std::uint64_t state_;
};

// FNV-1a over bytes, used for seed derivation and feature hashing.
std::uint64_t fnv1a(std::uint64_t seed, std::string_view bytes);
std::uint64_t fnv1a(std::uint64_t seed, std::uint64_t value);

// Derives an independent stream seed from a master seed and a tag, e.g.
// derive_seed(seed, "engine", sql_id).
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag);
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                          std::string_view detail);
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                          std::string_view detail, std::uint64_t n);

}  // namespace hintloop
