#include "srq/rng.hpp"

namespace srq {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t run_index,
                     std::uint64_t round, std::uint64_t party) {
  std::uint64_t k = splitmix64_mix(seed + kGamma);
  k = splitmix64_mix(k ^ (run_index + kGamma));
  k = splitmix64_mix(k ^ (round + kGamma));
  k = splitmix64_mix(k ^ (party + kGamma));
  key_ = k;
}

std::uint64_t SeededRng::next_u64() {
  ++counter_;
  return splitmix64_mix(key_ + counter_ * kGamma);
}

double SeededRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::size_t sample_discrete(std::span<const double> weights, double u) {
  double total = 0.0;
  for (double w : weights) total += w;
  double acc = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    last_nonzero = k;
    acc += weights[k] / total;
    if (u < acc) return k;
  }
  return last_nonzero;
}

}  // namespace srq
