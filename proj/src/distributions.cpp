#include "scert/distributions.hpp"

#include "scert/json_util.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace scert {

using nlohmann::json;

UniformBallSampler::UniformBallSampler(PNorm norm, std::size_t dim) : norm_(norm), dim_(dim) {
  if (dim == 0) throw InvalidArgument("ball sampler dimension must be positive");
}

UniformBallSampler uniform_ball_sampler(PNorm norm, std::size_t dim) {
  return UniformBallSampler(norm, dim);
}

void UniformBallSampler::draw(CounterRng& rng, std::span<double> out) const {
  if (out.size() != dim_) throw DimensionError("ball sampler output has wrong size");
  const double n = static_cast<double>(dim_);
  switch (norm_) {
    case PNorm::linf:
      for (auto& v : out) v = 2.0 * rng.uniform() - 1.0;
      return;
    case PNorm::l2: {
      double sq = 0.0;
      do {
        sq = 0.0;
        for (auto& v : out) {
          v = rng.normal();
          sq += v * v;
        }
      } while (sq == 0.0);
      const double scale = std::pow(rng.uniform(), 1.0 / n) / std::sqrt(sq);
      for (auto& v : out) v *= scale;
      return;
    }
    case PNorm::l1: {
      // Normalized exponential spacings are uniform on the simplex face
      // sum |u_k| = 1; U^(1/n) then spreads the mass over the ball's volume.
      double total = 0.0;
      for (auto& v : out) {
        v = rng.exponential();
        total += v;
      }
      const double scale = std::pow(rng.uniform(), 1.0 / n) / total;
      for (auto& v : out) v = rng.coin() ? v * scale : -v * scale;
      return;
    }
  }
}

InputDistribution InputDistribution::uniform_norm_ball(Vector center, double radius, PNorm norm) {
  if (center.size() == 0) throw InvalidArgument("uniform_norm_ball: empty center");
  if (!center.allFinite()) throw InvalidArgument("uniform_norm_ball: non-finite center");
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw InvalidArgument("uniform_norm_ball: radius must be positive and finite");
  const auto dim = static_cast<std::size_t>(center.size());
  return InputDistribution(UniformNormBall{std::move(center), radius, norm}, dim);
}

InputDistribution InputDistribution::gaussian(Vector mean, Matrix covariance) {
  const auto n = mean.size();
  if (n == 0) throw InvalidArgument("gaussian: empty mean");
  if (covariance.rows() != n || covariance.cols() != n)
    throw DimensionError("gaussian: covariance must be " + std::to_string(n) + "x" +
                         std::to_string(n));
  if (!mean.allFinite() || !covariance.allFinite())
    throw InvalidArgument("gaussian: non-finite parameter");
  const double magnitude = std::max(1.0, covariance.cwiseAbs().maxCoeff());
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * magnitude)
    throw InvalidArgument("gaussian: covariance is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(covariance);
  if (eig.info() != Eigen::Success) throw InvalidArgument("gaussian: eigendecomposition failed");
  if (eig.eigenvalues().minCoeff() < -1e-10 * magnitude)
    throw InvalidArgument("gaussian: covariance is not positive semidefinite");
  const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Matrix factor = eig.eigenvectors() * root.asDiagonal();
  return InputDistribution(Gaussian{std::move(mean), std::move(covariance), std::move(factor)},
                           static_cast<std::size_t>(n));
}

InputDistribution InputDistribution::product(std::vector<Marginal> marginals) {
  if (marginals.empty()) throw InvalidArgument("product: no marginals");
  for (const auto& m : marginals) {
    if (const auto* u = std::get_if<UniformMarginal>(&m)) {
      if (!std::isfinite(u->low) || !std::isfinite(u->high) || !(u->low < u->high))
        throw InvalidArgument("product: uniform marginal needs finite low < high");
    } else {
      const auto& g = std::get<NormalMarginal>(m);
      if (!std::isfinite(g.mean) || !std::isfinite(g.stddev) || g.stddev < 0.0)
        throw InvalidArgument("product: normal marginal needs finite mean and stddev >= 0");
    }
  }
  const auto dim = marginals.size();
  return InputDistribution(Product{std::move(marginals)}, dim);
}

InputDistribution InputDistribution::mixture(std::vector<double> weights,
                                             std::vector<InputDistribution> components) {
  if (components.empty()) throw InvalidArgument("mixture: no components");
  if (weights.size() != components.size())
    throw DimensionError("mixture: weights and components differ in length");
  for (double w : weights)
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("mixture: negative weight");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("mixture: weights must sum to 1");
  const std::size_t dim = components.front().dim();
  for (const auto& c : components)
    if (c.dim() != dim) throw DimensionError("mixture: components differ in dimension");
  return InputDistribution(Mixture{std::move(weights), std::move(components)}, dim);
}

void InputDistribution::draw(CounterRng& rng, std::span<double> out) const {
  if (out.size() != dim_) throw DimensionError("distribution output has wrong size");
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformNormBall>) {
          UniformBallSampler(d.norm, dim_).draw(rng, out);
          for (std::size_t k = 0; k < dim_; ++k)
            out[k] = d.center(static_cast<Eigen::Index>(k)) + d.radius * out[k];
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          Vector z(static_cast<Eigen::Index>(dim_));
          for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = rng.normal();
          const Vector x = d.mean + d.factor * z;
          for (std::size_t k = 0; k < dim_; ++k) out[k] = x(static_cast<Eigen::Index>(k));
        } else if constexpr (std::is_same_v<T, Product>) {
          for (std::size_t k = 0; k < dim_; ++k) {
            if (const auto* u = std::get_if<UniformMarginal>(&d.marginals[k]))
              out[k] = u->low + (u->high - u->low) * rng.uniform();
            else {
              const auto& g = std::get<NormalMarginal>(d.marginals[k]);
              out[k] = g.mean + g.stddev * rng.normal();
            }
          }
        } else {
          const double u = rng.uniform();
          double cumulative = 0.0;
          std::size_t pick = d.weights.size() - 1;
          for (std::size_t i = 0; i < d.weights.size(); ++i) {
            cumulative += d.weights[i];
            if (u < cumulative) {
              pick = i;
              break;
            }
          }
          d.components[pick].draw(rng, out);
        }
      },
      kind_);
}

Batch sample(const InputDistribution& dist, std::size_t count, std::uint64_t seed,
             std::uint64_t stream, std::uint64_t first) {
  if (count == 0) throw InvalidArgument("sample: count must be at least 1");
  const std::size_t dim = dist.dim();
  Batch out(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(dim));
  std::vector<double> point(dim);
  for (std::size_t j = 0; j < count; ++j) {
    CounterRng rng(seed, stream, first + j);
    dist.draw(rng, point);
    for (std::size_t k = 0; k < dim; ++k)
      out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = point[k];
  }
  return out;
}

InputDistribution parse_distribution(const json& doc) {
  if (!doc.is_object() || !doc.contains("kind"))
    throw ParseError("distribution JSON must be an object with a \"kind\"");
  const auto kind = doc["kind"].get<std::string>();
  auto need = [&](const char* key) -> const json& {
    if (!doc.contains(key)) throw ParseError("distribution '" + kind + "' needs \"" + key + "\"");
    return doc[key];
  };
  if (kind == "uniform_norm_ball") {
    return InputDistribution::uniform_norm_ball(json_util::to_vector(need("center"), "center"),
                                                json_util::to_double(need("radius"), "radius"),
                                                parse_pnorm(need("norm").get<std::string>()));
  }
  if (kind == "gaussian") {
    return InputDistribution::gaussian(json_util::to_vector(need("mean"), "mean"),
                                       json_util::to_matrix(need("covariance"), "covariance"));
  }
  if (kind == "product") {
    std::vector<Marginal> marginals;
    for (const auto& m : need("marginals")) {
      const auto mk = m.value("kind", std::string());
      if (mk == "uniform")
        marginals.emplace_back(UniformMarginal{m.at("low").get<double>(), m.at("high").get<double>()});
      else if (mk == "normal")
        marginals.emplace_back(NormalMarginal{m.at("mean").get<double>(), m.at("stddev").get<double>()});
      else
        throw ParseError("unknown marginal kind '" + mk + "'");
    }
    return InputDistribution::product(std::move(marginals));
  }
  if (kind == "mixture") {
    std::vector<double> weights;
    for (const auto& w : need("weights")) weights.push_back(w.get<double>());
    std::vector<InputDistribution> components;
    for (const auto& c : need("components")) components.push_back(parse_distribution(c));
    return InputDistribution::mixture(std::move(weights), std::move(components));
  }
  throw ParseError("unsupported distribution kind '" + kind + "'");
}

InputDistribution load_distribution(const std::filesystem::path& path) {
  return parse_distribution(json_util::read_file(path));
}

json to_json(const InputDistribution& dist) {
  return std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformNormBall>) {
          return {{"kind", "uniform_norm_ball"},
                  {"norm", to_string(d.norm)},
                  {"center", json_util::from_vector(d.center)},
                  {"radius", d.radius}};
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          return {{"kind", "gaussian"},
                  {"mean", json_util::from_vector(d.mean)},
                  {"covariance", json_util::from_matrix(d.covariance)}};
        } else if constexpr (std::is_same_v<T, Product>) {
          json marginals = json::array();
          for (const auto& m : d.marginals) {
            if (const auto* u = std::get_if<UniformMarginal>(&m))
              marginals.push_back({{"kind", "uniform"}, {"low", u->low}, {"high", u->high}});
            else {
              const auto& g = std::get<NormalMarginal>(m);
              marginals.push_back({{"kind", "normal"}, {"mean", g.mean}, {"stddev", g.stddev}});
            }
          }
          return {{"kind", "product"}, {"marginals", std::move(marginals)}};
        } else {
          json components = json::array();
          for (const auto& c : d.components) components.push_back(to_json(c));
          return {{"kind", "mixture"}, {"weights", d.weights}, {"components", std::move(components)}};
        }
      },
      dist.kind());
}

}  // namespace scert
