#pragma once

// Scalar reference kernels. Header-only so the SIMD translation units can
// reuse them for remainder lanes; every function handles the sample range
// [begin, end) of a coordinate-major batch.

#include <cmath>
#include <cstddef>

namespace scert::kernels::scalar {

inline void dense_range(const double* x, std::size_t count, std::size_t n_in,
                        const double* weights, const double* bias, std::size_t n_out, double* y,
                        std::size_t begin, std::size_t end) {
  for (std::size_t o = 0; o < n_out; ++o) {
    const double* w = weights + o * n_in;
    double* out = y + o * count;
    for (std::size_t i = begin; i < end; ++i) {
      double acc = bias[o];
      for (std::size_t k = 0; k < n_in; ++k) acc = acc + w[k] * x[k * count + i];
      out[i] = acc;
    }
  }
}

inline void dense(const double* x, std::size_t count, std::size_t n_in, const double* weights,
                  const double* bias, std::size_t n_out, double* y) {
  dense_range(x, count, n_in, weights, bias, n_out, y, 0, count);
}

inline void relu(double* values, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) values[i] = values[i] > 0.0 ? values[i] : 0.0;
}

inline void leaky_relu(double* values, std::size_t n, double slope) {
  for (std::size_t i = 0; i < n; ++i)
    values[i] = values[i] > 0.0 ? values[i] : values[i] * slope;
}

inline void affine_levels_range(const double* y, std::size_t count, std::size_t dim,
                                const double* a, double b, double* out, std::size_t begin,
                                std::size_t end) {
  for (std::size_t i = begin; i < end; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) acc = acc + a[k] * y[k * count + i];
    out[i] = acc + b;
  }
}

inline void affine_levels(const double* y, std::size_t count, std::size_t dim, const double* a,
                          double b, double* out) {
  affine_levels_range(y, count, dim, a, b, out, 0, count);
}

inline void distances_l1_range(const double* y, std::size_t count, std::size_t dim,
                               const double* center, double* out, std::size_t begin,
                               std::size_t end) {
  for (std::size_t i = begin; i < end; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) acc = acc + std::fabs(y[k * count + i] - center[k]);
    out[i] = acc;
  }
}

inline void distances_l1(const double* y, std::size_t count, std::size_t dim,
                         const double* center, double* out) {
  distances_l1_range(y, count, dim, center, out, 0, count);
}

inline void distances_l2_range(const double* y, std::size_t count, std::size_t dim,
                               const double* center, double* out, std::size_t begin,
                               std::size_t end) {
  for (std::size_t i = begin; i < end; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double d = y[k * count + i] - center[k];
      acc = acc + d * d;
    }
    out[i] = std::sqrt(acc);
  }
}

inline void distances_l2(const double* y, std::size_t count, std::size_t dim,
                         const double* center, double* out) {
  distances_l2_range(y, count, dim, center, out, 0, count);
}

inline void distances_linf_range(const double* y, std::size_t count, std::size_t dim,
                                 const double* center, double* out, std::size_t begin,
                                 std::size_t end) {
  for (std::size_t i = begin; i < end; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double d = std::fabs(y[k * count + i] - center[k]);
      acc = d > acc ? d : acc;
    }
    out[i] = acc;
  }
}

inline void distances_linf(const double* y, std::size_t count, std::size_t dim,
                           const double* center, double* out) {
  distances_linf_range(y, count, dim, center, out, 0, count);
}

inline void distances_mapped_l2_range(const double* y, std::size_t count, std::size_t dim,
                                      const double* center, const double* transform,
                                      double* out, std::size_t begin, std::size_t end) {
  for (std::size_t i = begin; i < end; ++i) {
    double acc = 0.0;
    for (std::size_t m = 0; m < dim; ++m) {
      const double* t = transform + m * dim;
      double u = 0.0;
      for (std::size_t k = 0; k < dim; ++k) u = u + t[k] * (y[k * count + i] - center[k]);
      acc = acc + u * u;
    }
    out[i] = std::sqrt(acc);
  }
}

inline void distances_mapped_l2(const double* y, std::size_t count, std::size_t dim,
                                const double* center, const double* transform, double* out) {
  distances_mapped_l2_range(y, count, dim, center, transform, out, 0, count);
}

}  // namespace scert::kernels::scalar
