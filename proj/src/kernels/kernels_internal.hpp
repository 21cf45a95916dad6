#pragma once

#include "evacsim/kernels.hpp"

namespace evacsim::kernels {

#ifdef EVACSIM_HAVE_AVX2
const Ops& avx2_ops();
#endif

// Runtime CPU check; safe to call from code built without SIMD flags.
bool cpu_supports_avx2();

}  // namespace evacsim::kernels
