#include "scorelab/simd.hpp"

namespace scorelab::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = a[i] - b[i];
        s += t * t;
    }
    return s;
}

void gemv_scalar(const double* rows, std::size_t m, std::size_t n, std::size_t stride,
                 const double* x, const double* bias, double* out) {
    for (std::size_t i = 0; i < m; ++i) {
        out[i] = dot_scalar(rows + i * stride, x, n) + (bias ? bias[i] : 0.0);
    }
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels k{Isa::Scalar, dot_scalar, axpy_scalar, squared_distance_scalar, gemv_scalar};
    return k;
}

}  // namespace scorelab::simd
