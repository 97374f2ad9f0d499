#include "scorelab/linalg.hpp"

#include <cmath>
#include <string>

#include "scorelab/errors.hpp"

namespace scorelab {

bool is_symmetric(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (std::abs(a(i, j) - a(j, i)) > tol) return false;
    return true;
}

Matrix cholesky(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("cholesky: matrix is not square");
    if (!a.all_finite()) throw InvalidArgument("cholesky: non-finite entries");
    if (!is_symmetric(a, 1e-10)) throw InvalidArgument("cholesky: matrix is not symmetric");
    const std::size_t n = a.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (!(diag > 0.0)) throw DecompositionError(j, diag);
        const double ljj = std::sqrt(diag);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return l;
}

Vector forward_substitute(const Matrix& lower, std::span<const double> b) {
    const std::size_t n = lower.rows();
    if (b.size() != n) throw DimensionError("forward_substitute: length mismatch");
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= lower(i, k) * y[k];
        y[i] = s / lower(i, i);
    }
    return y;
}

Vector backward_substitute_transposed(const Matrix& lower, std::span<const double> y) {
    const std::size_t n = lower.rows();
    if (y.size() != n) throw DimensionError("backward_substitute_transposed: length mismatch");
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= lower(k, ii) * x[k];
        x[ii] = s / lower(ii, ii);
    }
    return x;
}

SpdInverse spd_inverse_det(const Matrix& a) {
    const Matrix l = cholesky(a);
    const std::size_t n = l.rows();
    SpdInverse out;
    out.inverse = Matrix(n, n);
    Vector e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e.assign(n, 0.0);
        e[j] = 1.0;
        const Vector col = backward_substitute_transposed(l, forward_substitute(l, e));
        for (std::size_t i = 0; i < n; ++i) out.inverse(i, j) = col[i];
    }
    // Symmetrize away round-off so downstream symmetry checks hold exactly.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double m = 0.5 * (out.inverse(i, j) + out.inverse(j, i));
            out.inverse(i, j) = out.inverse(j, i) = m;
        }
    double logdet = 0.0;
    for (std::size_t i = 0; i < n; ++i) logdet += 2.0 * std::log(l(i, i));
    double det = 1.0;
    for (std::size_t i = 0; i < n; ++i) det *= l(i, i) * l(i, i);
    out.determinant = det;
    out.log_determinant = logdet;
    return out;
}

}  // namespace scorelab
