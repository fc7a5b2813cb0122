#include "netrelay/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace netrelay::kernels {

#ifdef NETRELAY_HAVE_AVX2
namespace detail {
const KernelTable& avx2_table_ref();
}
#endif

const KernelTable* avx2() {
#ifdef NETRELAY_HAVE_AVX2
  static const KernelTable* table = []() -> const KernelTable* {
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
      return &detail::avx2_table_ref();
    return nullptr;
  }();
  return table;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& table = []() -> const KernelTable& {
    const char* env = std::getenv("NETRELAY_SIMD");
    std::string_view mode = env ? env : "auto";
    if (mode == "scalar") return scalar();
    if (const KernelTable* a = avx2()) return *a;
    return scalar();
  }();
  return table;
}

}  // namespace netrelay::kernels
