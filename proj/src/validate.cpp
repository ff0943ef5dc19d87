#include "scert/validate.hpp"

#include <boost/math/distributions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace scert {

double clopper_pearson_lower(std::size_t successes, std::size_t trials, double confidence) {
  if (trials == 0) throw InvalidArgument("clopper_pearson_lower: no trials");
  if (successes > trials) throw InvalidArgument("clopper_pearson_lower: successes exceed trials");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw InvalidArgument("clopper_pearson_lower: confidence must lie in (0, 1)");
  if (successes == 0) return 0.0;
  const boost::math::beta_distribution<double> dist(static_cast<double>(successes),
                                                    static_cast<double>(trials - successes + 1));
  return boost::math::quantile(dist, 1.0 - confidence);
}

Batch validation_outputs(const VectorFunction& model, const InputDistribution& dist,
                         std::size_t count, std::uint64_t seed) {
  if (model.input_dim() != dist.dim())
    throw DimensionError("distribution dimension does not match the model input");
  constexpr std::size_t kChunk = 16384;
  Batch outputs(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(model.output_dim()));
  for (std::size_t first = 0; first < count; first += kChunk) {
    const std::size_t n = std::min(kChunk, count - first);
    const Batch ys = model.evaluate_batch(sample(dist, n, seed, streams::validation, first));
    outputs.middleRows(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(n)) = ys;
  }
  return outputs;
}

CoverageEstimate coverage_of(const Batch& outputs, const CoverParams& cover, const SafeRow& row,
                             double tol) {
  if (outputs.rows() == 0) throw InvalidArgument("coverage: no samples");
  std::size_t inside = 0;
  if (const auto* ball = std::get_if<NormBall>(&cover)) {
    const Vector dist = distances(ball->norm, outputs, ball->center);
    for (Eigen::Index j = 0; j < dist.size(); ++j) inside += dist(j) <= ball->radius + tol ? 1 : 0;
  } else {
    const double offset = std::get<HalfSpace>(cover).offset;
    const Vector levels = safety_levels(row, outputs);
    for (Eigen::Index j = 0; j < levels.size(); ++j) inside += levels(j) >= offset - tol ? 1 : 0;
  }
  CoverageEstimate est;
  est.samples = static_cast<std::size_t>(outputs.rows());
  est.inside = inside;
  est.p_hat = static_cast<double>(inside) / static_cast<double>(est.samples);
  est.ci_low = clopper_pearson_lower(inside, est.samples);
  return est;
}

CoverageEstimate estimate_coverage(const VectorFunction& model, const InputDistribution& dist,
                                   const CoverParams& cover, const SafeRow& row,
                                   std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw InvalidArgument("coverage: sample count must be at least 1");
  return coverage_of(validation_outputs(model, dist, samples, seed), cover, row);
}

double empirical_quantile(std::span<const double> levels, double eps) {
  if (levels.empty()) throw InvalidArgument("empirical_quantile: no levels");
  if (!(eps >= 0.0 && eps < 1.0)) throw InvalidArgument("empirical_quantile: eps must lie in [0, 1)");
  const auto m = levels.size();
  const auto rank = std::min(static_cast<std::size_t>(std::floor(eps * static_cast<double>(m))), m - 1);
  std::vector<double> sorted(levels.begin(), levels.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank), sorted.end());
  return sorted[rank];
}

double estimate_prl(const VectorFunction& model, const InputDistribution& dist, const SafeRow& row,
                    double eps, std::size_t samples, std::uint64_t seed) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("estimate_prl: eps must lie in (0, 1)");
  if (static_cast<double>(samples) < 100.0 / eps)
    throw InvalidArgument("estimate_prl: need at least 100/eps = " +
                          std::to_string(static_cast<std::size_t>(std::ceil(100.0 / eps))) +
                          " samples, got " + std::to_string(samples));
  const Vector levels = safety_levels(row, validation_outputs(model, dist, samples, seed));
  return empirical_quantile(std::span<const double>(levels.data(), static_cast<std::size_t>(levels.size())), eps);
}

double empirical_min_safety(const VectorFunction& model, const InputDistribution& dist,
                            const SafeRow& row, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw InvalidArgument("empirical_min_safety: sample count must be at least 1");
  return safety_levels(row, validation_outputs(model, dist, samples, seed)).minCoeff();
}

}  // namespace scert
