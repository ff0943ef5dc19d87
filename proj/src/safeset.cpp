#include "scert/safeset.hpp"

#include "scert/json_util.hpp"
#include "scert/kernels.hpp"

#include <limits>
#include <string>

namespace scert {

using nlohmann::json;

SafeSet::SafeSet(Matrix A, Vector b) : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() == 0 || A_.cols() == 0) throw DimensionError("safe set: A is empty");
  if (b_.size() != A_.rows())
    throw DimensionError("safe set: A has " + std::to_string(A_.rows()) + " rows but b has " +
                         std::to_string(b_.size()) + " entries");
  if (!A_.allFinite() || !b_.allFinite()) throw InvalidArgument("safe set: non-finite entry");
  for (Eigen::Index i = 0; i < A_.rows(); ++i) {
    if (A_.row(i).isZero(0.0))
      throw InvalidArgument("safe set: row " + std::to_string(i) +
                            " of A is zero; the row is " +
                            (b_(i) >= 0.0 ? "always satisfied" : "never satisfied") +
                            " and has no certificate to compute");
  }
}

SafeRow SafeSet::row(std::size_t i) const {
  const auto r = static_cast<Eigen::Index>(i);
  return SafeRow{A_.row(r).transpose(), b_(r)};
}

std::vector<SafeRow> SafeSet::rows() const {
  std::vector<SafeRow> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(row(i));
  return out;
}

double safety_level(const SafeRow& row, const Vector& y) {
  if (y.size() != row.a.size())
    throw DimensionError("safety level: y has " + std::to_string(y.size()) + " entries, a has " +
                         std::to_string(row.a.size()));
  // Same accumulation order as the batched kernel.
  double acc = 0.0;
  for (Eigen::Index k = 0; k < y.size(); ++k) acc = acc + row.a(k) * y(k);
  return acc + row.b;
}

Vector safety_levels(const SafeRow& row, const Batch& ys) {
  if (ys.cols() != row.a.size()) throw DimensionError("safety levels: dimension mismatch");
  Vector out(ys.rows());
  kernels::active().affine_levels(ys.data(), static_cast<std::size_t>(ys.rows()),
                                  static_cast<std::size_t>(ys.cols()), row.a.data(), row.b,
                                  out.data());
  return out;
}

double min_safety_level(const SafeSet& set, const Vector& y) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < set.size(); ++i) worst = std::min(worst, safety_level(set.row(i), y));
  return worst;
}

SafeSet parse_safe_set(const json& doc) {
  if (!doc.is_object() || !doc.contains("A") || !doc.contains("b"))
    throw ParseError("safe-set JSON must have \"A\" and \"b\"");
  return SafeSet(json_util::to_matrix(doc["A"], "A"), json_util::to_vector(doc["b"], "b"));
}

SafeSet load_safe_set(const std::filesystem::path& path) {
  return parse_safe_set(json_util::read_file(path));
}

json to_json(const SafeSet& set) {
  return {{"A", json_util::from_matrix(set.A())}, {"b", json_util::from_vector(set.b())}};
}

}  // namespace scert
