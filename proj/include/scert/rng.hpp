#pragma once

#include <cstdint>

namespace scert {

/// Stream identifiers. Each consumer of randomness draws from its own stream so
/// that, for instance, validation samples never overlap scenario samples.
namespace streams {
inline constexpr std::uint64_t scenario = 0;
inline constexpr std::uint64_t validation = 1;
inline constexpr std::uint64_t q_fit = 2;
inline constexpr std::uint64_t synthetic = 3;
}  // namespace streams

/// Counter-based generator: the state for sample `index` of `stream` under
/// `seed` is a pure function of the triple, so any partition of the index range
/// over workers reproduces the same draws. Within a sample the generator is a
/// SplitMix64 sequence.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1].
  double uniform_positive();
  double normal();
  double exponential();
  bool coin();

 private:
  std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t z);

}  // namespace scert
