#include "scert/geometry.hpp"

#include "scert/json_util.hpp"
#include "scert/kernels.hpp"

#include <cmath>
#include <string>

namespace scert {

using nlohmann::json;

namespace {

// Distance of a single point, through the scalar kernels so that it rounds
// exactly like the batched distances() used by the solvers.
double point_distance(const NormSpec& norm, const Vector& y, const Vector& center) {
  const auto& k = kernels::scalar_table();
  const auto dim = static_cast<std::size_t>(y.size());
  double out = 0.0;
  switch (norm.kind()) {
    case NormKind::l1: k.distances_l1(y.data(), 1, dim, center.data(), &out); break;
    case NormKind::l2: k.distances_l2(y.data(), 1, dim, center.data(), &out); break;
    case NormKind::linf: k.distances_linf(y.data(), 1, dim, center.data(), &out); break;
    case NormKind::quadratic: {
      const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> t =
          norm.transform();
      k.distances_mapped_l2(y.data(), 1, dim, center.data(), t.data(), &out);
      break;
    }
  }
  return out;
}

void check_dim(const NormSpec& norm, Eigen::Index n) {
  if (norm.kind() == NormKind::quadratic && norm.Q().rows() != n)
    throw DimensionError("quadratic norm is " + std::to_string(norm.Q().rows()) +
                         "-dimensional, vector has " + std::to_string(n) + " entries");
}

}  // namespace

NormSpec NormSpec::from_pnorm(PNorm p) {
  switch (p) {
    case PNorm::l1: return l1();
    case PNorm::l2: return l2();
    case PNorm::linf: return linf();
  }
  return l2();
}

NormSpec NormSpec::quadratic(Matrix Q) {
  if (Q.rows() == 0 || Q.rows() != Q.cols()) throw DimensionError("Q must be square and nonempty");
  if (!Q.allFinite()) throw InvalidArgument("Q has non-finite entries");
  const double magnitude = Q.cwiseAbs().maxCoeff();
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, magnitude))
    throw InvalidArgument("Q is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(Q, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || lo <= 1e-10 * hi) throw InvalidArgument("Q is not positive definite");

  NormSpec spec(NormKind::quadratic);
  spec.Q_ = std::move(Q);
  spec.chol_.compute(spec.Q_);
  if (spec.chol_.info() != Eigen::Success) throw InvalidArgument("Q is not positive definite");
  spec.transform_ = spec.chol_.matrixU();
  return spec;
}

std::string NormSpec::name() const {
  switch (kind_) {
    case NormKind::l1: return "l1";
    case NormKind::l2: return "l2";
    case NormKind::linf: return "linf";
    case NormKind::quadratic: return "q";
  }
  return "?";
}

double NormSpec::norm(const Vector& v) const {
  check_dim(*this, v.size());
  return point_distance(*this, v, Vector::Zero(v.size()));
}

double NormSpec::dual(const Vector& a) const {
  check_dim(*this, a.size());
  if (!a.allFinite()) throw InvalidArgument("dual norm of a non-finite vector");
  switch (kind_) {
    case NormKind::l1: return a.cwiseAbs().maxCoeff();
    case NormKind::l2: return a.norm();
    case NormKind::linf: return a.cwiseAbs().sum();
    case NormKind::quadratic:
      // a^T Q^{-1} a = ||L^{-1} a||^2 with Q = L L^T.
      return chol_.matrixL().solve(a).norm();
  }
  return 0.0;
}

double dual_norm(const NormSpec& norm, const Vector& a) { return norm.dual(a); }

Vector distances(const NormSpec& norm, const Batch& ys, const Vector& center) {
  if (ys.cols() != center.size()) throw DimensionError("distances: dimension mismatch");
  check_dim(norm, center.size());
  const auto& k = kernels::active();
  const auto count = static_cast<std::size_t>(ys.rows());
  const auto dim = static_cast<std::size_t>(ys.cols());
  Vector out(ys.rows());
  switch (norm.kind()) {
    case NormKind::l1: k.distances_l1(ys.data(), count, dim, center.data(), out.data()); break;
    case NormKind::l2: k.distances_l2(ys.data(), count, dim, center.data(), out.data()); break;
    case NormKind::linf: k.distances_linf(ys.data(), count, dim, center.data(), out.data()); break;
    case NormKind::quadratic: {
      const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> t =
          norm.transform();
      k.distances_mapped_l2(ys.data(), count, dim, center.data(), t.data(), out.data());
      break;
    }
  }
  return out;
}

std::size_t parameter_dim(const CoverParams& cover) {
  if (const auto* ball = std::get_if<NormBall>(&cover))
    return static_cast<std::size_t>(ball->center.size()) + 1;
  return 1;
}

bool contains(const CoverParams& cover, const SafeRow& row, const Vector& y, double tol) {
  if (const auto* ball = std::get_if<NormBall>(&cover)) {
    if (y.size() != ball->center.size()) throw DimensionError("contains: dimension mismatch");
    check_dim(ball->norm, y.size());
    return point_distance(ball->norm, y, ball->center) <= ball->radius + tol;
  }
  return safety_level(row, y) >= std::get<HalfSpace>(cover).offset - tol;
}

double approx_robustness(const CoverParams& cover, const SafeRow& row) {
  if (const auto* ball = std::get_if<NormBall>(&cover))
    return safety_level(row, ball->center) - ball->radius * ball->norm.dual(row.a);
  return std::get<HalfSpace>(cover).offset;
}

bool Regularizer::pure_localization() const { return std::isinf(weight); }

std::string to_string(RegularizerKind kind) {
  switch (kind) {
    case RegularizerKind::none: return "none";
    case RegularizerKind::radius: return "radius";
    case RegularizerKind::radius_squared: return "radius_squared";
  }
  return "?";
}

RegularizerKind parse_regularizer_kind(const std::string& name) {
  if (name == "none") return RegularizerKind::none;
  if (name == "radius") return RegularizerKind::radius;
  if (name == "radius_squared") return RegularizerKind::radius_squared;
  throw ParseError("unknown regularizer kind '" + name + "'");
}

double volume_penalty(const Regularizer& reg, const CoverParams& cover) {
  if (reg.kind == RegularizerKind::none) return 0.0;
  const auto* ball = std::get_if<NormBall>(&cover);
  if (ball == nullptr)
    throw InvalidArgument("a " + to_string(reg.kind) +
                          " regularizer needs a radius; half-space covers have none");
  return reg.kind == RegularizerKind::radius ? ball->radius : ball->radius * ball->radius;
}

double scenario_objective(const CoverParams& cover, const SafeRow& row, const Regularizer& reg) {
  if (reg.pure_localization()) throw InvalidArgument("scenario objective needs a finite lambda");
  const double r_hat = approx_robustness(cover, row);
  if (reg.weight == 0.0) return r_hat;
  return r_hat - reg.weight * volume_penalty(reg, cover);
}

NormSpec fit_pca_qnorm(const Batch& samples) {
  const auto n = samples.cols();
  const auto count = samples.rows();
  if (n == 0) throw DimensionError("fit_pca_qnorm: zero-dimensional samples");
  if (count <= n)
    throw InvalidArgument("fit_pca_qnorm: need more samples (" + std::to_string(count) +
                          ") than dimensions (" + std::to_string(n) + ")");
  const Eigen::RowVectorXd mean = samples.colwise().mean();
  const Matrix centered = samples.rowwise() - mean;
  const Matrix sigma = (centered.transpose() * centered) / static_cast<double>(count - 1);
  const double trace = sigma.trace();
  if (!(trace > 0.0)) throw InvalidArgument("fit_pca_qnorm: samples have zero spread");
  const double ridge = 1e-8 * trace / static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
  if (eig.info() != Eigen::Success) throw InvalidArgument("fit_pca_qnorm: eigendecomposition failed");
  const Vector inv = (eig.eigenvalues().array().max(0.0) + ridge).inverse();
  Matrix Q = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
  Q = 0.5 * (Q + Q.transpose());
  return NormSpec::quadratic(std::move(Q));
}

std::size_t CoverClass::parameter_dim(std::size_t output_dim) const {
  return family == CoverFamily::half_space ? 1 : output_dim + 1;
}

std::string CoverClass::name() const {
  if (family == CoverFamily::half_space) return "half_space";
  if (norm == NormKind::quadratic) return fit_q ? "q_pca" : "q";
  return NormSpec::from_pnorm(norm == NormKind::l1   ? PNorm::l1
                              : norm == NormKind::l2 ? PNorm::l2
                                                     : PNorm::linf)
      .name();
}

CoverClass cover_class_from_name(const std::string& name) {
  CoverClass cls;
  if (name == "half_space") {
    cls.family = CoverFamily::half_space;
  } else if (name == "l1") {
    cls.norm = NormKind::l1;
  } else if (name == "l2" || name == "norm_ball") {
    cls.norm = NormKind::l2;
  } else if (name == "linf") {
    cls.norm = NormKind::linf;
  } else if (name == "q_pca") {
    cls.norm = NormKind::quadratic;
    cls.fit_q = true;
  } else {
    throw ParseError("unknown cover class '" + name +
                     "' (expected l1, l2, linf, q_pca or half_space)");
  }
  return cls;
}

CoverClass parse_cover_class(const json& doc) {
  if (doc.is_string()) return cover_class_from_name(doc.get<std::string>());
  if (!doc.is_object()) throw ParseError("cover class must be an object");
  const auto family = doc.value("class", std::string("norm_ball"));
  if (family == "half_space") return cover_class_from_name("half_space");
  if (family != "norm_ball") throw ParseError("unknown cover class '" + family + "'");
  const auto norm = doc.value("norm", std::string("l2"));
  if (norm == "q") {
    CoverClass cls;
    cls.norm = NormKind::quadratic;
    if (!doc.contains("Q")) throw ParseError("norm \"q\" needs an explicit \"Q\"");
    cls.Q = json_util::to_matrix(doc["Q"], "Q");
    return cls;
  }
  return cover_class_from_name(norm);
}

json to_json(const CoverClass& cls) {
  if (cls.family == CoverFamily::half_space) return {{"class", "half_space"}};
  json out{{"class", "norm_ball"}, {"norm", cls.name()}};
  if (cls.Q && !cls.fit_q) out["Q"] = json_util::from_matrix(*cls.Q);
  return out;
}

Regularizer parse_regularizer(const json& doc) {
  if (!doc.is_object()) throw ParseError("regularizer must be an object");
  Regularizer reg;
  reg.weight = doc.contains("lambda") ? json_util::to_double(doc["lambda"], "lambda") : 0.0;
  const auto default_kind = reg.weight > 0.0 ? "radius_squared" : "none";
  reg.kind = parse_regularizer_kind(doc.value("kind", std::string(default_kind)));
  if (!(reg.weight >= 0.0)) throw InvalidArgument("lambda must be nonnegative");
  if (reg.pure_localization() && reg.kind == RegularizerKind::none)
    throw InvalidArgument("lambda = inf needs a radius or radius_squared regularizer");
  return reg;
}

json to_json(const Regularizer& reg) {
  return {{"kind", to_string(reg.kind)}, {"lambda", json_util::from_double(reg.weight)}};
}

json to_json(const NormSpec& norm) {
  json out{{"norm", norm.name()}};
  if (norm.kind() == NormKind::quadratic) out["Q"] = json_util::from_matrix(norm.Q());
  return out;
}

NormSpec parse_norm_spec(const json& doc) {
  const auto name = doc.at("norm").get<std::string>();
  if (name == "q") return NormSpec::quadratic(json_util::to_matrix(doc.at("Q"), "Q"));
  return NormSpec::from_pnorm(parse_pnorm(name));
}

json to_json(const CoverParams& cover) {
  if (const auto* ball = std::get_if<NormBall>(&cover)) {
    json out = to_json(ball->norm);
    out["class"] = "norm_ball";
    out["center"] = json_util::from_vector(ball->center);
    out["radius"] = ball->radius;
    return out;
  }
  return {{"class", "half_space"}, {"offset", std::get<HalfSpace>(cover).offset}};
}

CoverParams parse_cover_params(const json& doc) {
  try {
    if (doc.at("class").get<std::string>() == "half_space")
      return HalfSpace{doc.at("offset").get<double>()};
    NormBall ball{parse_norm_spec(doc), json_util::to_vector(doc.at("center"), "center"),
                  doc.at("radius").get<double>()};
    if (!(ball.radius > 0.0)) throw InvalidArgument("cover radius must be positive");
    return ball;
  } catch (const json::exception& e) {
    throw ParseError(std::string("cover parameters: ") + e.what());
  }
}

}  // namespace scert
