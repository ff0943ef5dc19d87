#pragma once

#include "scert/common.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace scert {

/// A black-box map R^n_x -> R^n_y. The assessment pipeline only ever calls
/// evaluate_batch, so anything implementing this interface can be assessed.
/// Implementations must be safe to call concurrently.
class VectorFunction {
 public:
  virtual ~VectorFunction() = default;

  virtual std::size_t input_dim() const = 0;
  virtual std::size_t output_dim() const = 0;

  /// inputs: count x input_dim, returns count x output_dim.
  virtual Batch evaluate_batch(const Batch& inputs) const = 0;

  Vector evaluate(const Vector& x) const;
};

enum class ActivationKind { identity, relu, tanh, sigmoid, leaky_relu };

struct Activation {
  ActivationKind kind = ActivationKind::identity;
  double slope = 0.01;  // leaky_relu only

  static Activation relu() { return {ActivationKind::relu, 0.0}; }
  static Activation identity() { return {ActivationKind::identity, 0.0}; }
};

std::string to_string(ActivationKind kind);

struct DenseLayer {
  Matrix weights;  // n_out x n_in, row = output neuron
  Vector bias;     // n_out
  Activation activation;
};

/// Feed-forward network of dense layers. Immutable once built.
class NetworkModel final : public VectorFunction {
 public:
  /// Validates that layer dimensions chain and that all parameters are finite.
  explicit NetworkModel(std::vector<DenseLayer> layers);

  std::size_t input_dim() const override { return input_dim_; }
  std::size_t output_dim() const override { return output_dim_; }
  Batch evaluate_batch(const Batch& inputs) const override;

  const std::vector<DenseLayer>& layers() const { return layers_; }

 private:
  std::vector<DenseLayer> layers_;
  std::size_t input_dim_ = 0;
  std::size_t output_dim_ = 0;
};

/// Network JSON: {"layers":[{"weights":[[...]],"bias":[...],"activation":"relu"}]}.
/// leaky_relu layers take an optional "slope" (default 0.01).
NetworkModel parse_model(const nlohmann::json& doc);
NetworkModel load_model(const std::filesystem::path& path);
nlohmann::json to_json(const NetworkModel& model);

/// Random network with the given layer widths (widths[0] = n_x, back = n_y).
/// Weights are N(0, scale^2 / fan_in), biases N(0, scale^2). Hidden layers use
/// `hidden`, the last layer uses `output`.
NetworkModel random_network(std::span<const std::size_t> widths, std::uint64_t seed,
                            Activation hidden = Activation::relu(),
                            Activation output = Activation::relu(), double scale = 1.0);

}  // namespace scert
