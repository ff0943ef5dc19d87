#pragma once

#include <cstddef>
#include <string_view>

// Batched inner loops over samples. Every kernel takes coordinate-major data
// (coordinate k of sample i lives at data[k * count + i]) and produces one
// result per sample. Implementations vectorize across samples and keep the
// per-sample operation order of the scalar reference, so all tables return
// bit-identical results.
namespace scert::kernels {

struct KernelTable {
  std::string_view name;

  // y[o*count + i] = bias[o] + sum_k weights[o*n_in + k] * x[k*count + i]
  void (*dense)(const double* x, std::size_t count, std::size_t n_in, const double* weights,
                const double* bias, std::size_t n_out, double* y);

  void (*relu)(double* values, std::size_t n);
  void (*leaky_relu)(double* values, std::size_t n, double slope);

  // out[i] = (sum_k a[k] * y[k*count + i]) + b
  void (*affine_levels)(const double* y, std::size_t count, std::size_t dim, const double* a,
                        double b, double* out);

  // out[i] = ||y_i - center|| in the respective norm
  void (*distances_l1)(const double* y, std::size_t count, std::size_t dim, const double* center,
                       double* out);
  void (*distances_l2)(const double* y, std::size_t count, std::size_t dim, const double* center,
                       double* out);
  void (*distances_linf)(const double* y, std::size_t count, std::size_t dim,
                         const double* center, double* out);

  // out[i] = ||T (y_i - center)||_2 with T a dim x dim row-major matrix
  void (*distances_mapped_l2)(const double* y, std::size_t count, std::size_t dim,
                              const double* center, const double* transform, double* out);
};

const KernelTable& scalar_table();

/// nullptr when the build has no AVX2 variant.
const KernelTable* avx2_table();

bool cpu_has_avx2();

/// Table used by the library. Picks AVX2 when the CPU supports it unless the
/// environment variable SCENARIO_CERT_KERNELS is set to "scalar".
const KernelTable& active();

}  // namespace scert::kernels
