#pragma once

#include "scert/common.hpp"
#include "scert/geometry.hpp"
#include "scert/safeset.hpp"

#include <cstddef>
#include <string>

namespace scert {

/// Smallest N with N >= (2/eps) (ln(1/delta) + p). Requires eps, delta in (0, 1]
/// and p >= 1.
std::size_t sample_size(double eps, double delta, std::size_t p);

enum class SolverMethod { interior_point, subgradient };

struct SolverOptions {
  SolverMethod method = SolverMethod::interior_point;
  std::size_t max_iter = 50000;
  /// Subgradient method: relative improvement of the best objective over a
  /// 200-iteration window below which it stops.
  double tol_obj = 1e-7;
  /// Interior-point method: relative duality gap at which it stops.
  double tol_gap = 1e-10;
  /// Radius cap as a multiple of the sample-set diameter.
  double radius_cap_multiplier = 1e3;
};

std::string to_string(SolverMethod method);
SolverMethod parse_solver_method(const std::string& name);

/// maximize r_hat(theta) - lambda v(theta) s.t. y_j in h(theta) for all samples.
struct ScenarioProblem {
  Batch outputs;  // N x n_y
  SafeRow row;
  CoverFamily family = CoverFamily::norm_ball;
  NormSpec norm = NormSpec::l2();  // norm_ball only
  Regularizer regularizer;
  SolverOptions options;
};

enum class SolveStatus { optimal, iteration_limit, radius_capped };

std::string to_string(SolveStatus status);
SolveStatus parse_solve_status(const std::string& name);

struct ScenarioSolution {
  CoverParams theta_star;
  double r_hat = 0.0;
  /// r_hat - lambda v; -v under pure localization.
  double objective = 0.0;
  std::size_t iterations = 0;
  SolveStatus status = SolveStatus::optimal;
};

/// offset* = min_j (a^T y_j + b).
ScenarioSolution solve_half_space(const ScenarioProblem& problem);

/// Solves the norm-ball problem by eliminating the radius, r(center) =
/// max_j ||y_j - center||, and minimizing the resulting convex function of the
/// center. The returned radius is recomputed from the returned center, so every
/// sample is contained by construction.
ScenarioSolution solve_norm_ball(const ScenarioProblem& problem);

ScenarioSolution solve(const ScenarioProblem& problem);

/// Largest pairwise distance between samples in the given norm.
double sample_diameter(const NormSpec& norm, const Batch& ys);

}  // namespace scert
