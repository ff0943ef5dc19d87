#include "scert/rng.hpp"

#include <cmath>
#include <numbers>

namespace scert {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const std::uint64_t key = mix64(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
  state_ = mix64(key ^ mix64(index + 0xD1B54A32D192ED03ULL));
}

std::uint64_t CounterRng::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix64(state_);
}

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double CounterRng::uniform_positive() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double CounterRng::normal() {
  // Box-Muller; one variate per call keeps the draw count per sample fixed.
  const double u1 = uniform_positive();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double CounterRng::exponential() { return -std::log(uniform_positive()); }

bool CounterRng::coin() { return (next_u64() >> 63) != 0; }

}  // namespace scert
