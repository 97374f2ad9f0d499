// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "scorelab/simd.hpp"

namespace scorelab::simd {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

double squared_distance_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d t = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(t, t, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double t = a[i] - b[i];
        s += t * t;
    }
    return s;
}

void gemv_avx2(const double* rows, std::size_t m, std::size_t n, std::size_t stride,
               const double* x, const double* bias, double* out) {
    std::size_t i = 0;
    // Four rows at a time share each load of x.
    for (; i + 4 <= m; i += 4) {
        const double* r0 = rows + i * stride;
        const double* r1 = r0 + stride;
        const double* r2 = r1 + stride;
        const double* r3 = r2 + stride;
        __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
        __m256d a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();
        std::size_t j = 0;
        for (; j + 4 <= n; j += 4) {
            const __m256d vx = _mm256_loadu_pd(x + j);
            a0 = _mm256_fmadd_pd(_mm256_loadu_pd(r0 + j), vx, a0);
            a1 = _mm256_fmadd_pd(_mm256_loadu_pd(r1 + j), vx, a1);
            a2 = _mm256_fmadd_pd(_mm256_loadu_pd(r2 + j), vx, a2);
            a3 = _mm256_fmadd_pd(_mm256_loadu_pd(r3 + j), vx, a3);
        }
        double s0 = hsum(a0), s1 = hsum(a1), s2 = hsum(a2), s3 = hsum(a3);
        for (; j < n; ++j) {
            s0 += r0[j] * x[j];
            s1 += r1[j] * x[j];
            s2 += r2[j] * x[j];
            s3 += r3[j] * x[j];
        }
        out[i] = s0 + (bias ? bias[i] : 0.0);
        out[i + 1] = s1 + (bias ? bias[i + 1] : 0.0);
        out[i + 2] = s2 + (bias ? bias[i + 2] : 0.0);
        out[i + 3] = s3 + (bias ? bias[i + 3] : 0.0);
    }
    for (; i < m; ++i) out[i] = dot_avx2(rows + i * stride, x, n) + (bias ? bias[i] : 0.0);
}

}  // namespace

const Kernels& avx2_kernel_table() {
    static const Kernels k{Isa::Avx2, dot_avx2, axpy_avx2, squared_distance_avx2, gemv_avx2};
    return k;
}

}  // namespace scorelab::simd
