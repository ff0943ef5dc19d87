#include "reduced_ball.hpp"

#include <cmath>
#include <limits>

namespace scert::detail {
namespace {

// A subgradient of w -> max_j ||p_j - w|| at w, taken from the lowest-index
// farthest sample.
Vector radius_subgradient(const ReducedBallProblem& problem, const Vector& w, Eigen::Index far) {
  const Vector u = problem.points.row(far).transpose() - w;
  Vector g = Vector::Zero(w.size());
  switch (problem.norm) {
    case PNorm::l2: {
      const double len = u.norm();
      if (len > 0.0) g = -u / len;
      break;
    }
    case PNorm::l1:
      for (Eigen::Index k = 0; k < u.size(); ++k) g(k) = u(k) > 0.0 ? -1.0 : (u(k) < 0.0 ? 1.0 : 0.0);
      break;
    case PNorm::linf: {
      Eigen::Index k = 0;
      u.cwiseAbs().maxCoeff(&k);
      g(k) = u(k) > 0.0 ? -1.0 : 1.0;
      break;
    }
  }
  return g;
}

}  // namespace

ReducedSolution solve_subgradient(const ReducedBallProblem& problem) {
  const Batch& p = problem.points;
  const auto n = p.cols();
  const double step_scale =
      std::max((p.colwise().maxCoeff() - p.colwise().minCoeff()).norm(), 1e-12);
  constexpr std::size_t kWindow = 200;

  Vector w = Vector::Zero(n);
  ReducedSolution result;
  result.w = w;
  double best = std::numeric_limits<double>::infinity();
  double window_start_best = best;

  for (std::size_t k = 1; k <= problem.options.max_iter; ++k) {
    result.iterations = k;
    const Vector dist = reduced_distances(problem, w);
    Eigen::Index far = 0;
    const double reach = dist.maxCoeff(&far);

    if (reach <= problem.cap) {
      const double value = problem.objective(w, reach);
      if (value < best) {
        best = value;
        result.w = w;
      }
    }

    Vector g = radius_subgradient(problem, w, far);
    if (reach <= problem.cap && !problem.pure_localization)
      g = -problem.a + problem.radius_slope(reach) * g;
    const double len = g.norm();
    if (len == 0.0) {
      result.converged = true;
      return result;
    }
    w -= (step_scale / std::sqrt(static_cast<double>(k))) * g / len;

    if (k % kWindow == 0) {
      if (std::isfinite(window_start_best) &&
          window_start_best - best <= problem.options.tol_obj * std::max(1.0, std::abs(best))) {
        result.converged = true;
        return result;
      }
      window_start_best = best;
    }
  }
  return result;
}

}  // namespace scert::detail
