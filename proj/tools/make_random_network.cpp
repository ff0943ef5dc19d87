#include "scert/json_util.hpp"
#include "scert/model.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

scert::Activation activation_from_name(const std::string& name) {
  if (name == "relu") return scert::Activation::relu();
  if (name == "identity" || name == "linear") return scert::Activation::identity();
  if (name == "tanh") return {scert::ActivationKind::tanh};
  if (name == "sigmoid") return {scert::ActivationKind::sigmoid};
  if (name == "leaky_relu") return {scert::ActivationKind::leaky_relu};
  throw scert::InvalidArgument("unknown activation '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Write a randomly initialized dense network as model JSON"};
  std::vector<std::size_t> widths;
  std::uint64_t seed = 0;
  std::string hidden = "relu";
  std::string output = "relu";
  double scale = 1.0;
  std::string out = "model.json";
  app.add_option("--widths", widths, "layer widths, input first, e.g. 5,35,30,2")
      ->required()
      ->delimiter(',');
  app.add_option("--seed", seed, "weight seed")->capture_default_str();
  app.add_option("--hidden", hidden, "hidden-layer activation")->capture_default_str();
  app.add_option("--output", output, "output-layer activation")->capture_default_str();
  app.add_option("--scale", scale, "weight scale")->capture_default_str();
  app.add_option("--out", out, "output path")->capture_default_str();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    const auto net = scert::random_network(widths, seed, activation_from_name(hidden),
                                           activation_from_name(output), scale);
    scert::json_util::write_file(out, scert::to_json(net));
    std::cout << out << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
