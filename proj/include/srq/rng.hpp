#pragma once

// Counter-based random streams.
//
// Every stream is identified by the tuple (seed, run_index, round, party). The
// key is the SplitMix64 finalizer folded over the tuple; the i-th draw of the
// stream is splitmix64(key + (i + 1) * 0x9E3779B97F4A7C15). Doubles take the top
// 53 bits. Any stream can be regenerated from its tuple alone, so rounds can be
// simulated in any order or on any thread and still reproduce one transcript.

#include <cstddef>
#include <cstdint>
#include <span>

namespace srq {

std::uint64_t splitmix64_mix(std::uint64_t z);

class SeededRng {
 public:
  SeededRng(std::uint64_t seed, std::uint64_t run_index, std::uint64_t round,
            std::uint64_t party);

  std::uint64_t next_u64();
  // Uniform in [0, 1).
  double uniform();
  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Inverse-CDF draw over unnormalized non-negative weights; zero-weight entries
// are never returned.
std::size_t sample_discrete(std::span<const double> weights, double u);

// Stream ids used by the protocol.
namespace stream {
inline constexpr std::uint64_t kSource = 0;
inline constexpr std::uint64_t kAlice = 1;
inline constexpr std::uint64_t kBob = 2;
inline constexpr std::uint64_t kPublic = 3;
}  // namespace stream

}  // namespace srq
