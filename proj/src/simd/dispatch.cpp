#include <atomic>
#include <cstdlib>
#include <string>

#include "scorelab/simd.hpp"

namespace scorelab::simd {

#if defined(SCORELAB_HAVE_AVX2)
const Kernels& avx2_kernel_table();
#endif
#if defined(SCORELAB_HAVE_NEON)
const Kernels& neon_kernel_table();
#endif

const Kernels* avx2_kernels() {
#if defined(SCORELAB_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &avx2_kernel_table() : nullptr;
#else
    return nullptr;
#endif
}

const Kernels* neon_kernels() {
#if defined(SCORELAB_HAVE_NEON)
    return &neon_kernel_table();
#else
    return nullptr;
#endif
}

namespace {

const Kernels* lookup(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return &scalar_kernels();
        case Isa::Avx2: return avx2_kernels();
        case Isa::Neon: return neon_kernels();
    }
    return nullptr;
}

const Kernels* select_default() {
    if (const char* env = std::getenv("SCORELAB_SIMD")) {
        const std::string want(env);
        const Kernels* k = nullptr;
        if (want == "scalar") k = lookup(Isa::Scalar);
        else if (want == "avx2") k = lookup(Isa::Avx2);
        else if (want == "neon") k = lookup(Isa::Neon);
        if (k) return k;
    }
    if (const Kernels* k = avx2_kernels()) return k;
    if (const Kernels* k = neon_kernels()) return k;
    return &scalar_kernels();
}

std::atomic<const Kernels*>& slot() {
    static std::atomic<const Kernels*> current{select_default()};
    return current;
}

}  // namespace

const Kernels& active() { return *slot().load(std::memory_order_acquire); }

Isa active_isa() { return active().isa; }

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "unknown";
}

bool force_isa(Isa isa) {
    const Kernels* k = lookup(isa);
    if (!k) return false;
    slot().store(k, std::memory_order_release);
    return true;
}

}  // namespace scorelab::simd
