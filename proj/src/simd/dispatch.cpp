// Runtime selection of the kernel table. Compiled without any -m flags so the
// CPU probe itself never executes AVX instructions.
#include <cstdlib>
#include <string_view>

#include "gausspack/simd/kernels.hpp"

namespace gausspack::simd {

#if defined(GAUSSPACK_HAVE_AVX2)
const KernelTable& avx2_kernel_table();
#endif

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool cpu_supports_avx2_fma() {
#if defined(GAUSSPACK_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* avx2_kernels() {
#if defined(GAUSSPACK_HAVE_AVX2)
  if (cpu_supports_avx2_fma()) return &avx2_kernel_table();
#endif
  return nullptr;
}

const KernelTable& active_kernels() {
  static const KernelTable& table = [] () -> const KernelTable& {
    const char* forced = std::getenv("GAUSSPACK_SIMD");
    if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return *t;
    return scalar_kernels();
  }();
  return table;
}

}  // namespace gausspack::simd
