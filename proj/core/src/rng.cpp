#include "hintloop/rng.hpp"

#include <cstring>

namespace hintloop {

namespace {

// splitmix64: full-period 64-bit mixer, stable everywhere.
std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : state_(seed) {
  // Warm up so nearby seeds decorrelate.
  for (int i = 0; i < 4; ++i) splitmix64(state_);
}

std::uint64_t Rng::next() { return splitmix64(state_); }

double Rng::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

std::size_t Rng::uniform_index(std::size_t n) {
  return static_cast<std::size_t>(next() % n);
}

std::size_t Rng::weighted_index(const std::vector<double>& weights) {
  double total = 0;
  for (double w : weights) total += w > 0 ? w : 0;
  if (total <= 0) return uniform_index(weights.size());
  double pick = uniform01() * total;
  double acc = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i] > 0 ? weights[i] : 0;
    if (pick < acc) return i;
  }
  return weights.size() - 1;
}

std::uint64_t fnv1a(std::uint64_t seed, std::string_view bytes) {
  std::uint64_t h = seed ^ 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a(std::uint64_t seed, std::uint64_t value) {
  char buf[8];
  std::memcpy(buf, &value, 8);
  return fnv1a(seed, std::string_view(buf, 8));
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) {
  return fnv1a(fnv1a(master, tag), master);
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                          std::string_view detail) {
  return fnv1a(derive_seed(master, tag), detail);
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                          std::string_view detail, std::uint64_t n) {
  return fnv1a(derive_seed(master, tag, detail), n);
}

}  // namespace hintloop
