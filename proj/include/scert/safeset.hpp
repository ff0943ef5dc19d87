#pragma once

#include "scert/common.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <vector>

namespace scert {

/// One half-space {y : a^T y + b >= 0} of a polyhedral safe set.
struct SafeRow {
  Vector a;
  double b = 0.0;
};

/// Polyhedral safe set {y : A y + b >= 0}. Rows of A must be nonzero.
class SafeSet {
 public:
  SafeSet(Matrix A, Vector b);

  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  std::size_t size() const { return static_cast<std::size_t>(A_.rows()); }
  std::size_t output_dim() const { return static_cast<std::size_t>(A_.cols()); }

  SafeRow row(std::size_t i) const;
  std::vector<SafeRow> rows() const;

 private:
  Matrix A_;
  Vector b_;
};

/// s(y) = a^T y + b.
double safety_level(const SafeRow& row, const Vector& y);

/// Safety level of every sample in the batch.
Vector safety_levels(const SafeRow& row, const Batch& ys);

/// min_i (A y + b)_i; nonnegative iff y is in the safe set.
double min_safety_level(const SafeSet& set, const Vector& y);

SafeSet parse_safe_set(const nlohmann::json& doc);
SafeSet load_safe_set(const std::filesystem::path& path);
nlohmann::json to_json(const SafeSet& set);

}  // namespace scert
