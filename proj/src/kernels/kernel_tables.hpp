#pragma once

#include "weyl/kernels.hpp"

namespace weyl::simd {

// Raw tables, defined only when the matching translation unit is compiled.
const KernelTable& avx2_kernels() noexcept;
const KernelTable& neon_kernels() noexcept;

}  // namespace weyl::simd
