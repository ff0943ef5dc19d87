#pragma once

// Norm-ball scenario problem after recentering, rescaling and (for quadratic
// norms) mapping into l2 coordinates:
//
//   minimize  -a^T w + dual * rho + penalty(rho)
//   s.t.      ||p_j - w|| <= rho  for all j,   0 < rho <= cap
//
// Under pure localization the objective is rho alone.

#include "scert/common.hpp"
#include "scert/geometry.hpp"
#include "scert/scenario.hpp"

#include <cstddef>

namespace scert::detail {

struct ReducedBallProblem {
  Batch points;
  Vector a;
  double dual = 0.0;
  PNorm norm = PNorm::l2;
  bool pure_localization = false;
  double linear_penalty = 0.0;     // coefficient of rho
  double quadratic_penalty = 0.0;  // coefficient of rho^2
  double cap = 1e3;
  SolverOptions options;

  double objective(const Vector& w, double rho) const;
  /// d objective / d rho at fixed w.
  double radius_slope(double rho) const;
};

struct ReducedSolution {
  Vector w;
  std::size_t iterations = 0;
  bool converged = false;
};

/// ||p_j - w|| for all samples.
Vector reduced_distances(const ReducedBallProblem& problem, const Vector& w);

ReducedSolution solve_interior_point(const ReducedBallProblem& problem);
ReducedSolution solve_subgradient(const ReducedBallProblem& problem);

}  // namespace scert::detail
