#include "scert/model.hpp"

#include "scert/json_util.hpp"
#include "scert/kernels.hpp"
#include "scert/rng.hpp"

#include <cmath>
#include <string>

namespace scert {

using nlohmann::json;

Vector VectorFunction::evaluate(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != input_dim())
    throw DimensionError("input has " + std::to_string(x.size()) + " entries, model expects " +
                         std::to_string(input_dim()));
  Batch one(1, x.size());
  one.row(0) = x.transpose();
  return evaluate_batch(one).row(0).transpose();
}

std::string to_string(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::identity: return "identity";
    case ActivationKind::relu: return "relu";
    case ActivationKind::tanh: return "tanh";
    case ActivationKind::sigmoid: return "sigmoid";
    case ActivationKind::leaky_relu: return "leaky_relu";
  }
  return "?";
}

namespace {

ActivationKind parse_activation(const std::string& name) {
  if (name == "identity" || name == "linear") return ActivationKind::identity;
  if (name == "relu") return ActivationKind::relu;
  if (name == "tanh") return ActivationKind::tanh;
  if (name == "sigmoid") return ActivationKind::sigmoid;
  if (name == "leaky_relu") return ActivationKind::leaky_relu;
  throw ParseError("unknown activation '" + name + "'");
}

void apply_activation(const Activation& act, double* values, std::size_t n) {
  const auto& k = kernels::active();
  switch (act.kind) {
    case ActivationKind::identity: break;
    case ActivationKind::relu: k.relu(values, n); break;
    case ActivationKind::leaky_relu: k.leaky_relu(values, n, act.slope); break;
    case ActivationKind::tanh:
      for (std::size_t i = 0; i < n; ++i) values[i] = std::tanh(values[i]);
      break;
    case ActivationKind::sigmoid:
      for (std::size_t i = 0; i < n; ++i) values[i] = 1.0 / (1.0 + std::exp(-values[i]));
      break;
  }
}

}  // namespace

NetworkModel::NetworkModel(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw DimensionError("network has no layers");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& layer = layers_[i];
    const std::string where = "layer " + std::to_string(i);
    if (layer.weights.rows() == 0 || layer.weights.cols() == 0)
      throw DimensionError(where + ": empty weight matrix");
    if (layer.bias.size() != layer.weights.rows())
      throw DimensionError(where + ": bias has " + std::to_string(layer.bias.size()) +
                           " entries, weights have " + std::to_string(layer.weights.rows()) +
                           " rows");
    if (i > 0 && layer.weights.cols() != layers_[i - 1].weights.rows())
      throw DimensionError(where + ": input dimension " + std::to_string(layer.weights.cols()) +
                           " does not match previous output dimension " +
                           std::to_string(layers_[i - 1].weights.rows()));
    if (!layer.weights.allFinite() || !layer.bias.allFinite())
      throw InvalidArgument(where + ": non-finite parameter");
  }
  input_dim_ = static_cast<std::size_t>(layers_.front().weights.cols());
  output_dim_ = static_cast<std::size_t>(layers_.back().weights.rows());
}

Batch NetworkModel::evaluate_batch(const Batch& inputs) const {
  if (static_cast<std::size_t>(inputs.cols()) != input_dim_)
    throw DimensionError("inputs have " + std::to_string(inputs.cols()) +
                         " columns, model expects " + std::to_string(input_dim_));
  if (!inputs.allFinite()) throw InvalidArgument("non-finite network input");
  const auto count = static_cast<std::size_t>(inputs.rows());
  const auto& k = kernels::active();

  Batch current = inputs;
  for (const auto& layer : layers_) {
    // Row-major copy of the weights: the kernel walks one output neuron at a time.
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> w = layer.weights;
    Batch next(inputs.rows(), layer.weights.rows());
    k.dense(current.data(), count, static_cast<std::size_t>(layer.weights.cols()), w.data(),
            layer.bias.data(), static_cast<std::size_t>(layer.weights.rows()), next.data());
    apply_activation(layer.activation, next.data(), static_cast<std::size_t>(next.size()));
    current = std::move(next);
  }
  return current;
}

NetworkModel parse_model(const json& doc) {
  if (!doc.is_object() || !doc.contains("layers") || !doc["layers"].is_array())
    throw ParseError("network JSON must be an object with a \"layers\" array");
  std::vector<DenseLayer> layers;
  for (std::size_t i = 0; i < doc["layers"].size(); ++i) {
    const auto& l = doc["layers"][i];
    const std::string where = "layer " + std::to_string(i);
    if (!l.is_object() || !l.contains("weights") || !l.contains("bias"))
      throw ParseError(where + ": needs \"weights\" and \"bias\"");
    DenseLayer layer;
    layer.weights = json_util::to_matrix(l["weights"], where + " weights");
    layer.bias = json_util::to_vector(l["bias"], where + " bias");
    const std::string act = l.value("activation", std::string("identity"));
    layer.activation.kind = parse_activation(act);
    if (layer.activation.kind == ActivationKind::leaky_relu)
      layer.activation.slope = l.value("slope", 0.01);
    layers.push_back(std::move(layer));
  }
  return NetworkModel(std::move(layers));
}

NetworkModel load_model(const std::filesystem::path& path) {
  return parse_model(json_util::read_file(path));
}

json to_json(const NetworkModel& model) {
  json layers = json::array();
  for (const auto& layer : model.layers()) {
    json l{{"weights", json_util::from_matrix(layer.weights)},
           {"bias", json_util::from_vector(layer.bias)},
           {"activation", to_string(layer.activation.kind)}};
    if (layer.activation.kind == ActivationKind::leaky_relu) l["slope"] = layer.activation.slope;
    layers.push_back(std::move(l));
  }
  return json{{"layers", std::move(layers)}};
}

NetworkModel random_network(std::span<const std::size_t> widths, std::uint64_t seed,
                            Activation hidden, Activation output, double scale) {
  if (widths.size() < 2) throw InvalidArgument("random_network needs at least two widths");
  std::vector<DenseLayer> layers;
  std::uint64_t index = 0;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const auto n_in = static_cast<Eigen::Index>(widths[l]);
    const auto n_out = static_cast<Eigen::Index>(widths[l + 1]);
    DenseLayer layer;
    layer.weights.resize(n_out, n_in);
    layer.bias.resize(n_out);
    CounterRng rng(seed, streams::synthetic, index++);
    const double w_scale = scale / std::sqrt(static_cast<double>(n_in));
    for (Eigen::Index o = 0; o < n_out; ++o) {
      for (Eigen::Index i = 0; i < n_in; ++i) layer.weights(o, i) = w_scale * rng.normal();
      layer.bias(o) = scale * rng.normal();
    }
    layer.activation = (l + 2 == widths.size()) ? output : hidden;
    layers.push_back(std::move(layer));
  }
  return NetworkModel(std::move(layers));
}

}  // namespace scert
