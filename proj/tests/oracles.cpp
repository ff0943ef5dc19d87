#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace scert::oracle {

double norm_value(const NormSpec& norm, const Vector& v) {
  switch (norm.kind()) {
    case NormKind::l1: {
      double s = 0.0;
      for (double x : v) s += std::abs(x);
      return s;
    }
    case NormKind::l2: {
      double s = 0.0;
      for (double x : v) s += x * x;
      return std::sqrt(s);
    }
    case NormKind::linf: {
      double m = 0.0;
      for (double x : v) m = std::max(m, std::abs(x));
      return m;
    }
    case NormKind::quadratic: {
      const Matrix& Q = norm.Q();
      double s = 0.0;
      for (Eigen::Index i = 0; i < v.size(); ++i)
        for (Eigen::Index j = 0; j < v.size(); ++j) s += v(i) * Q(i, j) * v(j);
      return std::sqrt(std::max(s, 0.0));
    }
  }
  return 0.0;
}

std::vector<Vector> sphere_directions(const NormSpec& norm, std::size_t dim, std::size_t count) {
  std::vector<Vector> dirs;
  dirs.reserve(count + (std::size_t{1} << dim) + 2 * dim);
  if (dim == 2) {
    for (std::size_t k = 0; k < count; ++k) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
      dirs.push_back(Vector{{std::cos(t), std::sin(t)}});
    }
  } else if (dim == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t k = 0; k < count; ++k) {
      const double z = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(count);
      const double rho = std::sqrt(1.0 - z * z);
      const double phi = golden * static_cast<double>(k);
      dirs.push_back(Vector{{rho * std::cos(phi), rho * std::sin(phi), z}});
    }
  } else {
    for (std::size_t i = 0; i < dim; ++i) {
      Vector e = Vector::Zero(static_cast<Eigen::Index>(dim));
      e(static_cast<Eigen::Index>(i)) = 1.0;
      dirs.push_back(e);
      dirs.push_back(-e);
    }
  }
  if (norm.kind() == NormKind::l1) {
    for (std::size_t i = 0; i < dim; ++i) {
      Vector e = Vector::Zero(static_cast<Eigen::Index>(dim));
      e(static_cast<Eigen::Index>(i)) = 1.0;
      dirs.push_back(e);
      dirs.push_back(-e);
    }
  } else if (norm.kind() == NormKind::linf) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << dim); ++mask) {
      Vector v(static_cast<Eigen::Index>(dim));
      for (std::size_t i = 0; i < dim; ++i) v(static_cast<Eigen::Index>(i)) = (mask >> i) & 1 ? 1.0 : -1.0;
      dirs.push_back(v);
    }
  }
  return dirs;
}

double approx_robustness(const NormBall& ball, const SafeRow& row,
                         const std::vector<Vector>& directions) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vector& u : directions) {
    const double len = norm_value(ball.norm, u);
    double level = row.b;
    for (Eigen::Index k = 0; k < u.size(); ++k)
      level += row.a(k) * (ball.center(k) + ball.radius * u(k) / len);
    best = std::min(best, level);
  }
  return best;
}

double approx_robustness(const NormBall& ball, const SafeRow& row, std::size_t count) {
  return approx_robustness(
      ball, row, sphere_directions(ball.norm, static_cast<std::size_t>(ball.center.size()), count));
}

double dual_value(const NormSpec& norm, const Vector& a) {
  const NormBall unit{norm, Vector::Zero(a.size()), 1.0};
  return -approx_robustness(unit, SafeRow{a, 0.0}, 100000);
}

GridOptimum grid_center(const Batch& ys, const SafeRow& row, const NormSpec& norm,
                        const Regularizer& reg, Vector lo, Vector hi, std::size_t n, int rounds) {
  const double dual = dual_value(norm, row.a);
  GridOptimum best;
  best.objective = -std::numeric_limits<double>::infinity();
  Vector c(2);
  for (int round = 0; round < rounds; ++round) {
    const double hx = (hi(0) - lo(0)) / static_cast<double>(n - 1);
    const double hy = (hi(1) - lo(1)) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        c << lo(0) + hx * static_cast<double>(i), lo(1) + hy * static_cast<double>(j);
        double R = 0.0;
        for (Eigen::Index k = 0; k < ys.rows(); ++k)
          R = std::max(R, norm_value(norm, ys.row(k).transpose() - c));
        double v = 0.0;
        if (reg.kind == RegularizerKind::radius) v = R;
        if (reg.kind == RegularizerKind::radius_squared) v = R * R;
        const double rhat = row.b + row.a.dot(c) - R * dual;
        const double obj = reg.weight == 0.0 ? rhat : rhat - reg.weight * v;
        if (obj > best.objective) {
          best.objective = obj;
          best.center = c;
          best.radius = R;
        }
      }
    }
    lo = best.center - Vector{{2 * hx, 2 * hy}};
    hi = best.center + Vector{{2 * hx, 2 * hy}};
  }
  return best;
}

}  // namespace scert::oracle
