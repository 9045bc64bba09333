#include "fdrlab/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace fdrlab::kernels {

bool avx2_supported() {
#if defined(FDRLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

namespace {

const KernelTable& select() {
    const char* forced = std::getenv("FDRLAB_SIMD");
    if (forced != nullptr && std::string_view(forced) == "scalar") {
        return scalar::table();
    }
#ifdef FDRLAB_HAVE_AVX2
    if (avx2_supported()) {
        return avx2::table();
    }
#endif
    return scalar::table();
}

} // namespace

const KernelTable& active() {
    static const KernelTable& chosen = select();
    return chosen;
}

std::string_view isa_name(Isa isa) {
    switch (isa) {
    case Isa::avx2:
        return "avx2";
    case Isa::scalar:
        break;
    }
    return "scalar";
}

} // namespace fdrlab::kernels
