#include "scert/scenario.hpp"

#include "reduced_ball.hpp"
#include "scert/kernels.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace scert {

std::size_t sample_size(double eps, double delta, std::size_t p) {
  if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("epsilon must lie in (0, 1]");
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidArgument("delta must lie in (0, 1]");
  if (p == 0) throw InvalidArgument("parameter dimension p must be at least 1");
  const double bound = (2.0 / eps) * (std::log(1.0 / delta) + static_cast<double>(p));
  return static_cast<std::size_t>(std::ceil(bound));
}

std::string to_string(SolverMethod method) {
  return method == SolverMethod::interior_point ? "interior_point" : "subgradient";
}

SolverMethod parse_solver_method(const std::string& name) {
  if (name == "interior_point") return SolverMethod::interior_point;
  if (name == "subgradient") return SolverMethod::subgradient;
  throw ParseError("unknown solver '" + name + "' (expected interior_point or subgradient)");
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::iteration_limit: return "iteration_limit";
    case SolveStatus::radius_capped: return "radius_capped";
  }
  return "?";
}

SolveStatus parse_solve_status(const std::string& name) {
  if (name == "optimal") return SolveStatus::optimal;
  if (name == "iteration_limit") return SolveStatus::iteration_limit;
  if (name == "radius_capped") return SolveStatus::radius_capped;
  throw ParseError("unknown solve status '" + name + "'");
}

namespace detail {

double ReducedBallProblem::objective(const Vector& w, double rho) const {
  if (pure_localization) return rho;
  return -a.dot(w) + dual * rho + linear_penalty * rho + quadratic_penalty * rho * rho;
}

double ReducedBallProblem::radius_slope(double rho) const {
  if (pure_localization) return 1.0;
  return dual + linear_penalty + 2.0 * quadratic_penalty * rho;
}

Vector reduced_distances(const ReducedBallProblem& problem, const Vector& w) {
  const auto& k = kernels::active();
  const Batch& p = problem.points;
  const auto count = static_cast<std::size_t>(p.rows());
  const auto dim = static_cast<std::size_t>(p.cols());
  Vector out(p.rows());
  switch (problem.norm) {
    case PNorm::l1: k.distances_l1(p.data(), count, dim, w.data(), out.data()); break;
    case PNorm::l2: k.distances_l2(p.data(), count, dim, w.data(), out.data()); break;
    case PNorm::linf: k.distances_linf(p.data(), count, dim, w.data(), out.data()); break;
  }
  return out;
}

}  // namespace detail

namespace {

void check_problem(const ScenarioProblem& problem) {
  if (problem.outputs.rows() == 0) throw InvalidArgument("scenario problem has no samples");
  if (problem.outputs.cols() != problem.row.a.size())
    throw DimensionError("samples have " + std::to_string(problem.outputs.cols()) +
                         " coordinates, safe-set row has " + std::to_string(problem.row.a.size()));
  if (!problem.outputs.allFinite()) throw InvalidArgument("scenario samples must be finite");
  if (problem.row.a.isZero(0.0)) throw InvalidArgument("safe-set row a is zero");
  if (!(problem.regularizer.weight >= 0.0)) throw InvalidArgument("lambda must be nonnegative");
}

}  // namespace

ScenarioSolution solve_half_space(const ScenarioProblem& problem) {
  check_problem(problem);
  if (problem.family != CoverFamily::half_space)
    throw InvalidArgument("solve_half_space called on a norm-ball problem");
  if (problem.regularizer.kind != RegularizerKind::none && problem.regularizer.weight != 0.0)
    throw InvalidArgument("half-space covers take no volume regularizer");
  const Vector levels = safety_levels(problem.row, problem.outputs);
  ScenarioSolution sol;
  sol.theta_star = HalfSpace{levels.minCoeff()};
  sol.r_hat = approx_robustness(sol.theta_star, problem.row);
  sol.objective = sol.r_hat;
  sol.iterations = 0;
  sol.status = SolveStatus::optimal;
  return sol;
}

double sample_diameter(const NormSpec& norm, const Batch& ys) {
  double diameter = 0.0;
  for (Eigen::Index i = 0; i < ys.rows(); ++i)
    diameter = std::max(diameter, distances(norm, ys, ys.row(i).transpose()).maxCoeff());
  return diameter;
}

ScenarioSolution solve_norm_ball(const ScenarioProblem& problem) {
  check_problem(problem);
  if (problem.family != CoverFamily::norm_ball)
    throw InvalidArgument("solve_norm_ball called on a half-space problem");
  const auto& opts = problem.options;
  if (!(opts.radius_cap_multiplier > 1.0))
    throw InvalidArgument("radius cap multiplier must exceed 1");
  if (opts.max_iter == 0) throw InvalidArgument("max_iter must be positive");
  const NormSpec& norm = problem.norm;
  const Regularizer& reg = problem.regularizer;
  if (reg.pure_localization() && reg.kind == RegularizerKind::none)
    throw InvalidArgument("pure localization needs a radius regularizer");
  const Batch& ys = problem.outputs;
  const auto n = ys.cols();
  if (norm.kind() == NormKind::quadratic && norm.Q().rows() != n)
    throw DimensionError("quadratic norm dimension does not match the samples");

  const double diameter = sample_diameter(norm, ys);
  const double scale = diameter > 0.0 ? diameter : 1.0;
  const double cap = opts.radius_cap_multiplier * scale;
  const Eigen::RowVectorXd mean = ys.colwise().mean();

  detail::ReducedBallProblem reduced;
  reduced.options = opts;
  reduced.cap = opts.radius_cap_multiplier;
  reduced.pure_localization = reg.pure_localization();
  if (!reduced.pure_localization && reg.weight > 0.0) {
    if (reg.kind == RegularizerKind::radius) reduced.linear_penalty = reg.weight;
    if (reg.kind == RegularizerKind::radius_squared) reduced.quadratic_penalty = reg.weight * scale;
  }
  const Batch centered = (ys.rowwise() - mean) / scale;
  if (norm.kind() == NormKind::quadratic) {
    const Matrix& T = norm.transform();
    reduced.norm = PNorm::l2;
    reduced.points = centered * T.transpose();
    reduced.a = T.transpose().triangularView<Eigen::Lower>().solve(problem.row.a);
  } else {
    reduced.norm = norm.kind() == NormKind::l1   ? PNorm::l1
                   : norm.kind() == NormKind::l2 ? PNorm::l2
                                                 : PNorm::linf;
    reduced.points = centered;
    reduced.a = problem.row.a;
  }
  reduced.dual = norm.dual(problem.row.a);

  const detail::ReducedSolution rs = opts.method == SolverMethod::interior_point
                                         ? detail::solve_interior_point(reduced)
                                         : detail::solve_subgradient(reduced);

  Vector center = rs.w;
  if (norm.kind() == NormKind::quadratic)
    center = norm.transform().triangularView<Eigen::Upper>().solve(rs.w);
  center = (mean.transpose() + scale * center).eval();

  // The optimal radius for a center is its farthest sample; recomputing it
  // here makes every sample a member regardless of solver accuracy.
  double radius = distances(norm, ys, center).maxCoeff();
  if (!(radius > 0.0)) radius = std::numeric_limits<double>::min();

  NormBall ball{norm, std::move(center), radius};
  ScenarioSolution sol;
  sol.r_hat = approx_robustness(ball, problem.row);
  if (reg.pure_localization())
    sol.objective = -volume_penalty(reg, ball);
  else
    sol.objective = scenario_objective(ball, problem.row, reg);
  sol.theta_star = std::move(ball);
  sol.iterations = rs.iterations;
  if (radius >= cap * (1.0 - 1e-6))
    sol.status = SolveStatus::radius_capped;
  else
    sol.status = rs.converged ? SolveStatus::optimal : SolveStatus::iteration_limit;
  return sol;
}

ScenarioSolution solve(const ScenarioProblem& problem) {
  return problem.family == CoverFamily::half_space ? solve_half_space(problem)
                                                   : solve_norm_ball(problem);
}

}  // namespace scert
