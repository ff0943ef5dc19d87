#include <doctest.h>

#include "scert/kernels.hpp"
#include "scert/rng.hpp"

#include <cmath>
#include <cstring>
#include <vector>

using namespace scert;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(seed, streams::synthetic, i);
    v[i] = rng.coin() ? 0.0 : 4.0 * rng.normal();
  }
  return v;
}

bool bit_equal(const std::vector<double>& x, const std::vector<double>& y) {
  return x.size() == y.size() && std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0;
}

const kernels::KernelTable* simd() {
  if (!kernels::cpu_has_avx2()) return nullptr;
  return kernels::avx2_table();
}

const std::size_t kCounts[] = {1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 1000, 1003};

}  // namespace

TEST_CASE("active table is one of the built tables") {
  const auto& active = kernels::active();
  const bool is_scalar = &active == &kernels::scalar_table();
  const bool is_avx2 = kernels::avx2_table() != nullptr && &active == kernels::avx2_table();
  CHECK((is_scalar || is_avx2));
  CHECK(kernels::scalar_table().name == "scalar");
}

TEST_CASE("dense kernel matches scalar bit for bit") {
  const auto* v = simd();
  if (v == nullptr) return;
  for (std::size_t count : kCounts) {
    for (std::size_t n_in : {1u, 3u, 35u}) {
      const std::size_t n_out = 5;
      const auto x = random_values(count * n_in, count + n_in);
      const auto w = random_values(n_in * n_out, 7);
      const auto b = random_values(n_out, 8);
      std::vector<double> ys(count * n_out), yv(count * n_out);
      kernels::scalar_table().dense(x.data(), count, n_in, w.data(), b.data(), n_out, ys.data());
      v->dense(x.data(), count, n_in, w.data(), b.data(), n_out, yv.data());
      CHECK(bit_equal(ys, yv));
    }
  }
}

TEST_CASE("activation kernels match scalar bit for bit") {
  const auto* v = simd();
  if (v == nullptr) return;
  for (std::size_t count : kCounts) {
    auto base = random_values(count, 11 + count);
    base[0] = -0.0;
    auto s = base, a = base;
    kernels::scalar_table().relu(s.data(), count);
    v->relu(a.data(), count);
    CHECK(bit_equal(s, a));
    s = base;
    a = base;
    kernels::scalar_table().leaky_relu(s.data(), count, 0.03);
    v->leaky_relu(a.data(), count, 0.03);
    CHECK(bit_equal(s, a));
  }
}

TEST_CASE("relu clamps negatives and keeps positives") {
  std::vector<double> x{-2.0, 0.0, 3.5, -1e-300, 7.0};
  kernels::scalar_table().relu(x.data(), x.size());
  CHECK(x == std::vector<double>{0.0, 0.0, 3.5, 0.0, 7.0});
}

TEST_CASE("affine levels and distances match scalar bit for bit") {
  const auto* v = simd();
  if (v == nullptr) return;
  for (std::size_t count : kCounts) {
    for (std::size_t dim : {1u, 2u, 3u, 5u}) {
      const auto y = random_values(count * dim, 100 + count * dim);
      const auto c = random_values(dim, 5);
      const auto t = random_values(dim * dim, 6);
      std::vector<double> s(count), a(count);
      kernels::scalar_table().affine_levels(y.data(), count, dim, c.data(), 0.25, s.data());
      v->affine_levels(y.data(), count, dim, c.data(), 0.25, a.data());
      CHECK(bit_equal(s, a));
      kernels::scalar_table().distances_l1(y.data(), count, dim, c.data(), s.data());
      v->distances_l1(y.data(), count, dim, c.data(), a.data());
      CHECK(bit_equal(s, a));
      kernels::scalar_table().distances_l2(y.data(), count, dim, c.data(), s.data());
      v->distances_l2(y.data(), count, dim, c.data(), a.data());
      CHECK(bit_equal(s, a));
      kernels::scalar_table().distances_linf(y.data(), count, dim, c.data(), s.data());
      v->distances_linf(y.data(), count, dim, c.data(), a.data());
      CHECK(bit_equal(s, a));
      kernels::scalar_table().distances_mapped_l2(y.data(), count, dim, c.data(), t.data(), s.data());
      v->distances_mapped_l2(y.data(), count, dim, c.data(), t.data(), a.data());
      CHECK(bit_equal(s, a));
    }
  }
}

TEST_CASE("scalar distances agree with direct formulas") {
  // two samples in 2-D, coordinate-major
  const double y[] = {3.0, -1.0, 4.0, 2.0};
  const double c[] = {0.0, 0.0};
  double out[2];
  kernels::scalar_table().distances_l2(y, 2, 2, c, out);
  CHECK(out[0] == 5.0);
  CHECK(out[1] == doctest::Approx(std::sqrt(5.0)));
  kernels::scalar_table().distances_l1(y, 2, 2, c, out);
  CHECK(out[0] == 7.0);
  CHECK(out[1] == 3.0);
  kernels::scalar_table().distances_linf(y, 2, 2, c, out);
  CHECK(out[0] == 4.0);
  CHECK(out[1] == 2.0);
  const double t[] = {2.0, 0.0, 0.0, 1.0};
  kernels::scalar_table().distances_mapped_l2(y, 2, 2, c, t, out);
  CHECK(out[0] == doctest::Approx(std::sqrt(36.0 + 16.0)));
}
