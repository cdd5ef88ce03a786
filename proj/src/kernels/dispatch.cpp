#include <cstdlib>
#include <string_view>

#include "kernel_tables.hpp"

namespace weyl::simd {

const KernelTable* avx2_table() noexcept {
#if defined(WEYL_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return supported ? &avx2_kernels() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_table() noexcept {
#if defined(WEYL_HAVE_NEON)
  return &neon_kernels();
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() noexcept {
  const char* forced = std::getenv("WEYL_LAB_SIMD");
  if (forced != nullptr) {
    const std::string_view want(forced);
    if (want == "scalar") return scalar_table();
    if (want == "avx2" && avx2_table() != nullptr) return *avx2_table();
    if (want == "neon" && neon_table() != nullptr) return *neon_table();
  }
  if (const KernelTable* t = avx2_table()) return *t;
  if (const KernelTable* t = neon_table()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

}  // namespace weyl::simd
