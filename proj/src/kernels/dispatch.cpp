#include "scert/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace scert::kernels {

#ifdef SCERT_HAVE_AVX2
const KernelTable& avx2_table_impl();
#endif

const KernelTable* avx2_table() {
#ifdef SCERT_HAVE_AVX2
  return &avx2_table_impl();
#else
  return nullptr;
#endif
}

bool cpu_has_avx2() {
#if defined(SCERT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

const KernelTable& select() {
  const char* env = std::getenv("SCENARIO_CERT_KERNELS");
  if (env != nullptr && std::string_view(env) == "scalar") return scalar_table();
  if (avx2_table() != nullptr && cpu_has_avx2()) return *avx2_table();
  return scalar_table();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace scert::kernels
