#include "scert/kernels.hpp"

#include "kernels/scalar_impl.hpp"

#include <immintrin.h>

// Four samples per __m256d. Each lane runs exactly the scalar sequence of
// multiplies and adds (no FMA), and remainder samples go through the scalar
// reference, so results match scalar_table() bit for bit.

namespace scert::kernels {
namespace {

constexpr std::size_t kLanes = 4;

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

void dense(const double* x, std::size_t count, std::size_t n_in, const double* weights,
           const double* bias, std::size_t n_out, double* y) {
  const std::size_t vec_end = count - count % kLanes;
  for (std::size_t o = 0; o < n_out; ++o) {
    const double* w = weights + o * n_in;
    double* out = y + o * count;
    const __m256d b = _mm256_set1_pd(bias[o]);
    for (std::size_t i = 0; i < vec_end; i += kLanes) {
      __m256d acc = b;
      for (std::size_t k = 0; k < n_in; ++k) {
        const __m256d prod = _mm256_mul_pd(_mm256_set1_pd(w[k]), _mm256_loadu_pd(x + k * count + i));
        acc = _mm256_add_pd(acc, prod);
      }
      _mm256_storeu_pd(out + i, acc);
    }
  }
  scalar::dense_range(x, count, n_in, weights, bias, n_out, y, vec_end, count);
}

void relu(double* values, std::size_t n) {
  const std::size_t vec_end = n - n % kLanes;
  const __m256d zero = _mm256_setzero_pd();
  for (std::size_t i = 0; i < vec_end; i += kLanes) {
    const __m256d v = _mm256_loadu_pd(values + i);
    // v > 0 ? v : +0, which is also what the scalar form gives for -0 and NaN.
    const __m256d mask = _mm256_cmp_pd(v, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(values + i, _mm256_and_pd(mask, v));
  }
  scalar::relu(values + vec_end, n - vec_end);
}

void leaky_relu(double* values, std::size_t n, double slope) {
  const std::size_t vec_end = n - n % kLanes;
  const __m256d zero = _mm256_setzero_pd();
  const __m256d s = _mm256_set1_pd(slope);
  for (std::size_t i = 0; i < vec_end; i += kLanes) {
    const __m256d v = _mm256_loadu_pd(values + i);
    const __m256d mask = _mm256_cmp_pd(v, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(values + i, _mm256_blendv_pd(_mm256_mul_pd(v, s), v, mask));
  }
  scalar::leaky_relu(values + vec_end, n - vec_end, slope);
}

void affine_levels(const double* y, std::size_t count, std::size_t dim, const double* a,
                   double b, double* out) {
  const std::size_t vec_end = count - count % kLanes;
  const __m256d bv = _mm256_set1_pd(b);
  for (std::size_t i = 0; i < vec_end; i += kLanes) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k)
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(a[k]), _mm256_loadu_pd(y + k * count + i)));
    _mm256_storeu_pd(out + i, _mm256_add_pd(acc, bv));
  }
  scalar::affine_levels_range(y, count, dim, a, b, out, vec_end, count);
}

void distances_l1(const double* y, std::size_t count, std::size_t dim, const double* center,
                  double* out) {
  const std::size_t vec_end = count - count % kLanes;
  for (std::size_t i = 0; i < vec_end; i += kLanes) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(y + k * count + i), _mm256_set1_pd(center[k]));
      acc = _mm256_add_pd(acc, abs_pd(d));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  scalar::distances_l1_range(y, count, dim, center, out, vec_end, count);
}

void distances_l2(const double* y, std::size_t count, std::size_t dim, const double* center,
                  double* out) {
  const std::size_t vec_end = count - count % kLanes;
  for (std::size_t i = 0; i < vec_end; i += kLanes) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(y + k * count + i), _mm256_set1_pd(center[k]));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(acc));
  }
  scalar::distances_l2_range(y, count, dim, center, out, vec_end, count);
}

void distances_linf(const double* y, std::size_t count, std::size_t dim, const double* center,
                    double* out) {
  const std::size_t vec_end = count - count % kLanes;
  for (std::size_t i = 0; i < vec_end; i += kLanes) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k) {
      const __m256d d =
          abs_pd(_mm256_sub_pd(_mm256_loadu_pd(y + k * count + i), _mm256_set1_pd(center[k])));
      // d > acc ? d : acc
      acc = _mm256_blendv_pd(acc, d, _mm256_cmp_pd(d, acc, _CMP_GT_OQ));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  scalar::distances_linf_range(y, count, dim, center, out, vec_end, count);
}

void distances_mapped_l2(const double* y, std::size_t count, std::size_t dim,
                         const double* center, const double* transform, double* out) {
  const std::size_t vec_end = count - count % kLanes;
  for (std::size_t i = 0; i < vec_end; i += kLanes) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t m = 0; m < dim; ++m) {
      const double* t = transform + m * dim;
      __m256d u = _mm256_setzero_pd();
      for (std::size_t k = 0; k < dim; ++k) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(y + k * count + i), _mm256_set1_pd(center[k]));
        u = _mm256_add_pd(u, _mm256_mul_pd(_mm256_set1_pd(t[k]), d));
      }
      acc = _mm256_add_pd(acc, _mm256_mul_pd(u, u));
    }
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(acc));
  }
  scalar::distances_mapped_l2_range(y, count, dim, center, transform, out, vec_end, count);
}

}  // namespace

const KernelTable& avx2_table_impl() {
  static const KernelTable table{
      "avx2",           &dense,          &relu,           &leaky_relu,          &affine_levels,
      &distances_l1,    &distances_l2,   &distances_linf, &distances_mapped_l2,
  };
  return table;
}

}  // namespace scert::kernels
