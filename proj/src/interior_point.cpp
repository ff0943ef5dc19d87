#include "reduced_ball.hpp"

#include "scert/kernels.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <vector>

namespace scert::detail {
namespace {

// Log-barrier method. Linear constraints are rows of C z + e > 0 over
// z = (w, rho); l2 constraints use the second-order-cone barrier
// -log(rho^2 - ||p_j - w||^2), which has barrier parameter 2. With
// `fixed_rho` the radius coordinate is held at its starting value.
class BarrierSolver {
 public:
  BarrierSolver(const ReducedBallProblem& problem, Matrix C, Vector e, bool cone, bool fixed_rho)
      : pb_(problem), C_(std::move(C)), e_(std::move(e)), cone_(cone), fixed_rho_(fixed_rho) {
    n_ = problem.points.cols();
    objective_linear_ = Vector::Zero(n_ + 1);
    if (problem.pure_localization) {
      objective_linear_(n_) = 1.0;
    } else {
      objective_linear_.head(n_) = -problem.a;
      objective_linear_(n_) = problem.dual + problem.linear_penalty;
      objective_quadratic_ = problem.quadratic_penalty;
    }
    theta_ = static_cast<double>(C_.rows()) + (cone_ ? 2.0 * static_cast<double>(problem.points.rows()) : 0.0);
  }

  /// Returns false when the iteration budget ran out.
  bool run(Vector& z, std::size_t& iterations) const {
    double t = 1.0;
    const std::size_t budget = pb_.options.max_iter;
    while (true) {
      if (!center(z, t, iterations, budget)) return false;
      const double f = objective(z);
      if (theta_ / t <= pb_.options.tol_gap * std::max(1.0, std::abs(f))) return true;
      t *= 20.0;
    }
  }

  bool feasible(const Vector& z) const { return std::isfinite(barrier(z)); }

 private:
  double objective(const Vector& z) const {
    const double rho = z(n_);
    return objective_linear_.dot(z) + objective_quadratic_ * rho * rho;
  }

  double barrier(const Vector& z) const {
    const double rho = z(n_);
    if (!(rho > 0.0)) return std::numeric_limits<double>::infinity();
    double value = 0.0;
    if (C_.rows() > 0) {
      const Vector g = C_ * z + e_;
      if (!(g.minCoeff() > 0.0)) return std::numeric_limits<double>::infinity();
      value -= g.array().log().sum();
    }
    if (cone_) {
      const Vector dist = reduced_distances(pb_, z.head(n_));
      for (Eigen::Index j = 0; j < dist.size(); ++j) {
        const double slack = (rho - dist(j)) * (rho + dist(j));
        if (!(slack > 0.0)) return std::numeric_limits<double>::infinity();
        value -= std::log(slack);
      }
    }
    return value;
  }

  void derivatives(const Vector& z, double t, Vector& grad, Matrix& hess) const {
    const double rho = z(n_);
    grad = t * objective_linear_;
    grad(n_) += t * 2.0 * objective_quadratic_ * rho;
    hess = Matrix::Zero(n_ + 1, n_ + 1);
    hess(n_, n_) = t * 2.0 * objective_quadratic_;
    if (C_.rows() > 0) {
      const Vector inv = (C_ * z + e_).cwiseInverse();
      grad -= C_.transpose() * inv;
      hess += C_.transpose() * inv.cwiseAbs2().asDiagonal() * C_;
    }
    if (cone_) {
      const Batch& p = pb_.points;
      Vector ds(n_ + 1);
      for (Eigen::Index j = 0; j < p.rows(); ++j) {
        const Vector u = p.row(j).transpose() - z.head(n_);
        const double dist = u.norm();
        const double slack = (rho - dist) * (rho + dist);
        ds.head(n_) = 2.0 * u;
        ds(n_) = 2.0 * rho;
        grad -= ds / slack;
        hess.noalias() += (ds * ds.transpose()) / (slack * slack);
        hess.diagonal().head(n_).array() += 2.0 / slack;
        hess(n_, n_) -= 2.0 / slack;
      }
    }
    if (fixed_rho_) {
      grad(n_) = 0.0;
      hess.row(n_).setZero();
      hess.col(n_).setZero();
      hess(n_, n_) = 1.0;
    }
  }

  bool center(Vector& z, double t, std::size_t& iterations, std::size_t budget) const {
    Vector grad;
    Matrix hess;
    double value = t * objective(z) + barrier(z);
    for (int inner = 0; inner < 200; ++inner) {
      if (iterations >= budget) return false;
      ++iterations;
      derivatives(z, t, grad, hess);
      Eigen::LDLT<Matrix> ldlt(hess);
      Vector step = ldlt.solve(-grad);
      if (ldlt.info() != Eigen::Success || !step.allFinite()) {
        const double shift = 1e-12 * std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
        step = (hess + shift * Matrix::Identity(n_ + 1, n_ + 1)).ldlt().solve(-grad);
      }
      const double decrement = -grad.dot(step);
      if (!(decrement > 2e-12)) return true;

      double alpha = 1.0;
      Vector trial = z + alpha * step;
      double trial_value = t * objective(trial) + barrier(trial);
      while (!(trial_value <= value - 0.25 * alpha * decrement) && alpha > 1e-14) {
        alpha *= 0.5;
        trial = z + alpha * step;
        trial_value = t * objective(trial) + barrier(trial);
      }
      if (alpha <= 1e-14) return true;  // no further progress at this precision
      z = trial;
      value = trial_value;
    }
    return true;
  }

  const ReducedBallProblem& pb_;
  Matrix C_;
  Vector e_;
  bool cone_;
  bool fixed_rho_;
  Eigen::Index n_ = 0;
  Vector objective_linear_;
  double objective_quadratic_ = 0.0;
  double theta_ = 0.0;
};

// Without a penalty the optimal value is nondecreasing in the radius, so the
// radius is pinned to the cap.
bool radius_at_cap(const ReducedBallProblem& problem) {
  return !problem.pure_localization && problem.linear_penalty == 0.0 &&
         problem.quadratic_penalty == 0.0;
}

Vector initial_point(const ReducedBallProblem& problem) {
  const auto n = problem.points.cols();
  Vector z = Vector::Zero(n + 1);
  const double reach = reduced_distances(problem, z.head(n)).maxCoeff();
  z(n) = radius_at_cap(problem) ? problem.cap
                                : std::min(1.5 * reach + 0.1, 0.5 * (reach + problem.cap));
  return z;
}

void append_cap(std::vector<std::pair<Vector, double>>& rows, Eigen::Index n,
                const ReducedBallProblem& problem) {
  if (radius_at_cap(problem)) return;
  const double cap = problem.cap;
  Vector c = Vector::Zero(n + 1);
  c(n) = -1.0;
  rows.emplace_back(std::move(c), cap);
}

void to_matrix(const std::vector<std::pair<Vector, double>>& rows, Eigen::Index n, Matrix& C,
               Vector& e) {
  C.resize(static_cast<Eigen::Index>(rows.size()), n + 1);
  e.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    C.row(static_cast<Eigen::Index>(i)) = rows[i].first.transpose();
    e(static_cast<Eigen::Index>(i)) = rows[i].second;
  }
}

// rho - sigma^T (p_j - w) > 0
std::pair<Vector, double> sign_row(const Vector& p, const std::vector<double>& sigma) {
  const auto n = p.size();
  Vector c(n + 1);
  double offset = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    c(k) = sigma[static_cast<std::size_t>(k)];
    offset -= sigma[static_cast<std::size_t>(k)] * p(k);
  }
  c(n) = 1.0;
  return {std::move(c), offset};
}

std::vector<double> signs_of(const Vector& u) {
  std::vector<double> sigma(static_cast<std::size_t>(u.size()));
  for (Eigen::Index k = 0; k < u.size(); ++k) sigma[static_cast<std::size_t>(k)] = u(k) < 0.0 ? -1.0 : 1.0;
  return sigma;
}

}  // namespace

ReducedSolution solve_interior_point(const ReducedBallProblem& problem) {
  const Batch& p = problem.points;
  const auto n = p.cols();
  ReducedSolution result;

  if (problem.norm == PNorm::l2) {
    std::vector<std::pair<Vector, double>> rows;
    append_cap(rows, n, problem);
    Matrix C;
    Vector e;
    to_matrix(rows, n, C, e);
    BarrierSolver solver(problem, std::move(C), std::move(e), true, radius_at_cap(problem));
    Vector z = initial_point(problem);
    result.converged = solver.run(z, result.iterations);
    result.w = z.head(n);
    return result;
  }

  if (problem.norm == PNorm::linf) {
    std::vector<std::pair<Vector, double>> rows;
    for (Eigen::Index j = 0; j < p.rows(); ++j) {
      for (Eigen::Index k = 0; k < n; ++k) {
        for (double sigma : {1.0, -1.0}) {
          Vector c = Vector::Zero(n + 1);
          c(k) = sigma;
          c(n) = 1.0;
          rows.emplace_back(std::move(c), -sigma * p(j, k));
        }
      }
    }
    append_cap(rows, n, problem);
    Matrix C;
    Vector e;
    to_matrix(rows, n, C, e);
    BarrierSolver solver(problem, std::move(C), std::move(e), false, radius_at_cap(problem));
    Vector z = initial_point(problem);
    result.converged = solver.run(z, result.iterations);
    result.w = z.head(n);
    return result;
  }

  // l1: ||u||_1 = max over sign vectors of sigma^T u. Start with the sign
  // pattern of each sample at the initial center and add the pattern of every
  // violated sample until the solution satisfies the full l1 constraints.
  std::set<std::pair<Eigen::Index, std::vector<double>>> active;
  std::vector<std::pair<Vector, double>> rows;
  const Vector start = initial_point(problem);
  for (Eigen::Index j = 0; j < p.rows(); ++j) {
    const Vector pj = p.row(j).transpose();
    auto sigma = signs_of(pj - start.head(n));
    rows.push_back(sign_row(pj, sigma));
    active.emplace(j, std::move(sigma));
  }
  constexpr int kMaxRounds = 100;
  for (int round = 0; round < kMaxRounds; ++round) {
    std::vector<std::pair<Vector, double>> all = rows;
    append_cap(all, n, problem);
    Matrix C;
    Vector e;
    to_matrix(all, n, C, e);
    BarrierSolver solver(problem, std::move(C), std::move(e), false, radius_at_cap(problem));
    Vector z = start;
    const bool ok = solver.run(z, result.iterations);
    result.w = z.head(n);
    result.converged = ok;
    if (!ok) return result;

    const Vector dist = reduced_distances(problem, result.w);
    bool added = false;
    for (Eigen::Index j = 0; j < p.rows(); ++j) {
      if (dist(j) <= z(n) * (1.0 + 1e-12)) continue;
      const Vector pj = p.row(j).transpose();
      auto sigma = signs_of(pj - result.w);
      if (active.emplace(j, sigma).second) {
        rows.push_back(sign_row(pj, sigma));
        added = true;
      }
    }
    if (!added) return result;
  }
  result.converged = false;
  return result;
}

}  // namespace scert::detail
