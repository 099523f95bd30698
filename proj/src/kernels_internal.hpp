#pragma once

#include "pccdr/kernels.hpp"

namespace pccdr::kernels::detail {

// Each returns nullptr when the variant was not compiled into this build.
const KernelTable* avx2_table();
const KernelTable* neon_table();

}  // namespace pccdr::kernels::detail
