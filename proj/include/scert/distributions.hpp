#pragma once

#include "scert/common.hpp"
#include "scert/rng.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

namespace scert {

/// Volume-uniform sampler for the unit ball of an l1, l2 or linf norm.
class UniformBallSampler {
 public:
  UniformBallSampler(PNorm norm, std::size_t dim);

  PNorm norm() const { return norm_; }
  std::size_t dim() const { return dim_; }

  /// Writes one point of the unit ball into `out` (size dim).
  void draw(CounterRng& rng, std::span<double> out) const;

 private:
  PNorm norm_;
  std::size_t dim_;
};

UniformBallSampler uniform_ball_sampler(PNorm norm, std::size_t dim);

struct UniformNormBall {
  Vector center;
  double radius = 1.0;
  PNorm norm = PNorm::linf;
};

struct Gaussian {
  Vector mean;
  Matrix covariance;
  Matrix factor;  // factor * factor^T == covariance, filled by InputDistribution
};

struct UniformMarginal {
  double low = 0.0;
  double high = 1.0;
};

struct NormalMarginal {
  double mean = 0.0;
  double stddev = 1.0;
};

using Marginal = std::variant<UniformMarginal, NormalMarginal>;

struct Product {
  std::vector<Marginal> marginals;
};

class InputDistribution;

struct Mixture {
  std::vector<double> weights;
  std::vector<InputDistribution> components;
};

/// The random input distribution. Constructed through the named factories,
/// which validate parameters.
class InputDistribution {
 public:
  using Kind = std::variant<UniformNormBall, Gaussian, Product, Mixture>;

  static InputDistribution uniform_norm_ball(Vector center, double radius, PNorm norm);
  static InputDistribution gaussian(Vector mean, Matrix covariance);
  static InputDistribution product(std::vector<Marginal> marginals);
  static InputDistribution mixture(std::vector<double> weights,
                                   std::vector<InputDistribution> components);

  std::size_t dim() const { return dim_; }
  const Kind& kind() const { return kind_; }

  /// Draws one point into `out` (size dim).
  void draw(CounterRng& rng, std::span<double> out) const;

 private:
  InputDistribution(Kind kind, std::size_t dim) : kind_(std::move(kind)), dim_(dim) {}

  Kind kind_;
  std::size_t dim_ = 0;
};

/// Draws samples first..first+count-1 of `stream`. Sample j depends only on
/// (seed, stream, j), so prefixes of larger draws coincide with smaller draws.
Batch sample(const InputDistribution& dist, std::size_t count, std::uint64_t seed,
             std::uint64_t stream = streams::scenario, std::uint64_t first = 0);

InputDistribution parse_distribution(const nlohmann::json& doc);
InputDistribution load_distribution(const std::filesystem::path& path);
nlohmann::json to_json(const InputDistribution& dist);

}  // namespace scert
