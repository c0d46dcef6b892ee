#include <cstdlib>
#include <string>

#include "locreg/errors.hpp"
#include "locreg/simd/kernels.hpp"

namespace locreg::simd {

#if LOCREG_X86
bool avx2_supported() {
#if defined(__GNUC__) || defined(__clang__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}
#endif

namespace {

const Ops& select_backend() {
    const char* env = std::getenv("LOCREG_SIMD");
    const std::string mode = env ? env : "auto";
    if (mode == "scalar") return scalar_ops();
#if LOCREG_X86 && defined(LOCREG_HAVE_AVX2)
    if (mode == "avx2") {
        if (!avx2_supported())
            raise(ErrorCode::InvalidArgument,
                  "LOCREG_SIMD=avx2 requested but the CPU lacks AVX2/FMA");
        return avx2_ops();
    }
    if (mode == "auto") return avx2_supported() ? avx2_ops() : scalar_ops();
#else
    if (mode == "avx2")
        raise(ErrorCode::InvalidArgument,
              "LOCREG_SIMD=avx2 requested but this build has no AVX2 backend");
#endif
    if (mode != "auto")
        raise(ErrorCode::InvalidArgument,
              "unknown LOCREG_SIMD value '" + mode + "' (use auto, scalar, avx2)");
    return scalar_ops();
}

}  // namespace

const Ops& active_ops() {
    static const Ops& chosen = select_backend();
    return chosen;
}

}  // namespace locreg::simd
