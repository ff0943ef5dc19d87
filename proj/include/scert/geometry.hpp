#pragma once

#include "scert/common.hpp"
#include "scert/safeset.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <variant>

namespace scert {

/// Absolute tolerance on the norm value used by membership tests.
inline constexpr double kMembershipTol = 1e-9;

enum class NormKind { l1, l2, linf, quadratic };

/// A norm on R^n: l1, l2, linf, or ||y||_Q = sqrt(y^T Q y) for symmetric
/// positive definite Q.
class NormSpec {
 public:
  static NormSpec l1() { return NormSpec(NormKind::l1); }
  static NormSpec l2() { return NormSpec(NormKind::l2); }
  static NormSpec linf() { return NormSpec(NormKind::linf); }
  static NormSpec from_pnorm(PNorm p);
  /// Throws InvalidArgument unless Q is symmetric with eigenvalues above 1e-10
  /// relative to the largest one.
  static NormSpec quadratic(Matrix Q);

  NormKind kind() const { return kind_; }
  const Matrix& Q() const { return Q_; }
  /// T with ||y||_Q = ||T y||_2 (upper triangular, T^T T = Q). Empty unless quadratic.
  const Matrix& transform() const { return transform_; }
  std::string name() const;

  double norm(const Vector& v) const;
  double dual(const Vector& a) const;

 private:
  explicit NormSpec(NormKind kind) : kind_(kind) {}

  NormKind kind_ = NormKind::l2;
  Matrix Q_;
  Matrix transform_;
  Eigen::LLT<Matrix> chol_;
};

/// ||a||_* = sup_{||x|| <= 1} x^T a.
double dual_norm(const NormSpec& norm, const Vector& a);

/// ||y_i - center|| for every sample of the batch.
Vector distances(const NormSpec& norm, const Batch& ys, const Vector& center);

/// {y : ||y - center|| <= radius}
struct NormBall {
  NormSpec norm = NormSpec::l2();
  Vector center;
  double radius = 1.0;
};

/// {y : a^T y + b >= offset} for the safe-set row the cover belongs to.
struct HalfSpace {
  double offset = 0.0;
};

using CoverParams = std::variant<NormBall, HalfSpace>;

/// p: n_y + 1 for norm balls, 1 for half-spaces.
std::size_t parameter_dim(const CoverParams& cover);

bool contains(const CoverParams& cover, const SafeRow& row, const Vector& y,
              double tol = kMembershipTol);

/// inf { a^T y + b : y in h(theta) }. For a norm ball this is
/// b + a^T center - radius * ||a||_*, affine in (center, radius).
double approx_robustness(const CoverParams& cover, const SafeRow& row);

enum class RegularizerKind { none, radius, radius_squared };

/// lambda * v(theta). A weight of +infinity selects pure localization: the
/// cover of smallest v, ignoring the robustness term.
struct Regularizer {
  RegularizerKind kind = RegularizerKind::none;
  double weight = 0.0;

  bool pure_localization() const;
};

std::string to_string(RegularizerKind kind);
RegularizerKind parse_regularizer_kind(const std::string& name);

/// v(theta), without the weight. Throws InvalidArgument for a radius-based
/// regularizer on a half-space cover.
double volume_penalty(const Regularizer& reg, const CoverParams& cover);

/// r_hat(theta) - lambda v(theta). Requires a finite weight.
double scenario_objective(const CoverParams& cover, const SafeRow& row, const Regularizer& reg);

/// Q = (Sigma + gamma I)^{-1} with Sigma the unbiased sample covariance and
/// gamma = 1e-8 trace(Sigma) / n.
NormSpec fit_pca_qnorm(const Batch& samples);

enum class CoverFamily { norm_ball, half_space };

/// The family H a scenario problem optimizes over. For norm balls with
/// `fit_q` set, the Q matrix is fitted from output samples before solving.
struct CoverClass {
  CoverFamily family = CoverFamily::norm_ball;
  NormKind norm = NormKind::l2;
  bool fit_q = false;
  std::optional<Matrix> Q;  // explicit Q for NormKind::quadratic without fitting

  std::size_t parameter_dim(std::size_t output_dim) const;
  std::string name() const;
};

// Cover-class spec: {"class":"norm_ball","norm":"l2"} | {"norm":"q_pca"} |
// {"class":"half_space"}; an explicit quadratic norm is {"norm":"q","Q":[[...]]}.
CoverClass parse_cover_class(const nlohmann::json& doc);
/// Shorthand names used on the command line: l1, l2, linf, q_pca, half_space.
CoverClass cover_class_from_name(const std::string& name);
nlohmann::json to_json(const CoverClass& cls);

// {"kind":"radius_squared","lambda":0.1}; lambda may be the string "inf".
Regularizer parse_regularizer(const nlohmann::json& doc);
nlohmann::json to_json(const Regularizer& reg);

nlohmann::json to_json(const NormSpec& norm);
NormSpec parse_norm_spec(const nlohmann::json& doc);
nlohmann::json to_json(const CoverParams& cover);
CoverParams parse_cover_params(const nlohmann::json& doc);

}  // namespace scert
