#pragma once

#include <cstddef>
#include <string_view>

// Inner-loop kernels with a portable scalar reference and vectorized variants
// (AVX2+FMA on x86-64, NEON on aarch64) chosen once at runtime. Every variant
// is checked against the scalar reference in tests/unit/test_simd.cpp.
//
// Selection order: SCORELAB_SIMD environment variable ("scalar", "avx2",
// "neon") if set and supported, otherwise the widest ISA the CPU reports.

namespace scorelab::simd {

enum class Isa { Scalar, Avx2, Neon };

struct Kernels {
    Isa isa;
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    double (*squared_distance)(const double* a, const double* b, std::size_t n);
    // out[i] = dot(rows + i * stride, x, n) + (bias ? bias[i] : 0) for i < m
    void (*gemv)(const double* rows, std::size_t m, std::size_t n, std::size_t stride,
                 const double* x, const double* bias, double* out);
};

const Kernels& scalar_kernels();
// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const Kernels* avx2_kernels();
const Kernels* neon_kernels();

const Kernels& active();
Isa active_isa();
std::string_view isa_name(Isa isa);

// Test hook: pin the dispatch table. Returns false if `isa` is unavailable.
bool force_isa(Isa isa);

}  // namespace scorelab::simd
