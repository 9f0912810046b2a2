#pragma once

#include "netab/kernels.hpp"

namespace netab::kernels::detail {

const Table& scalar_table();
#if defined(NETAB_HAVE_AVX2)
const Table& avx2_table();
#endif
#if defined(NETAB_HAVE_NEON)
const Table& neon_table();
#endif

}  // namespace netab::kernels::detail
