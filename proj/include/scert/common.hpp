#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace scert {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A batch of points: one row per sample, one column per coordinate. Storage is
// column-major, so each coordinate is contiguous across samples; the kernels
// rely on that layout.
using Batch = Eigen::MatrixXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or JSON document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Vector or matrix sizes that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value outside the domain an operation accepts.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

enum class PNorm { l1, l2, linf };

std::string to_string(PNorm norm);
PNorm parse_pnorm(const std::string& name);

}  // namespace scert
