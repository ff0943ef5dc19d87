#pragma once

#include "scert/common.hpp"
#include "scert/distributions.hpp"
#include "scert/geometry.hpp"
#include "scert/model.hpp"
#include "scert/safeset.hpp"

#include <cstddef>
#include <cstdint>
#include <span>

namespace scert {

struct CoverageEstimate {
  double p_hat = 0.0;
  /// One-sided 99% Clopper-Pearson lower bound on the coverage probability.
  double ci_low = 0.0;
  std::size_t samples = 0;
  std::size_t inside = 0;
};

/// Lower end of the one-sided Clopper-Pearson interval at `confidence`.
double clopper_pearson_lower(std::size_t successes, std::size_t trials, double confidence = 0.99);

/// Outputs of `count` fresh validation draws (validation stream).
Batch validation_outputs(const VectorFunction& model, const InputDistribution& dist,
                         std::size_t count, std::uint64_t seed);

CoverageEstimate coverage_of(const Batch& outputs, const CoverParams& cover, const SafeRow& row,
                             double tol = kMembershipTol);

CoverageEstimate estimate_coverage(const VectorFunction& model, const InputDistribution& dist,
                                   const CoverParams& cover, const SafeRow& row,
                                   std::size_t samples, std::uint64_t seed);

/// The (floor(eps * M) + 1)-th smallest level: a plug-in estimate of the
/// eps-quantile that errs low.
double empirical_quantile(std::span<const double> levels, double eps);

/// Empirical probabilistic robustness level. Requires samples >= 100 / eps.
double estimate_prl(const VectorFunction& model, const InputDistribution& dist,
                    const SafeRow& row, double eps, std::size_t samples, std::uint64_t seed);

/// Smallest safety level over fresh samples; an upper bound on the
/// deterministic robustness level.
double empirical_min_safety(const VectorFunction& model, const InputDistribution& dist,
                            const SafeRow& row, std::size_t samples, std::uint64_t seed);

}  // namespace scert
