#pragma once

#include "scorelab/matrix.hpp"

namespace scorelab {

// Lower-triangular L with L * L^T = a. Throws DecompositionError naming the
// first pivot that is not strictly positive. Symmetry is checked to 1e-10.
Matrix cholesky(const Matrix& a);

struct SpdInverse {
    Matrix inverse;
    double determinant = 0.0;
    double log_determinant = 0.0;
};

// Inverse and determinant via Cholesky; det = prod(L_ii)^2.
SpdInverse spd_inverse_det(const Matrix& a);

// Solves L y = b (forward) and L^T x = y (backward) for lower-triangular L.
Vector forward_substitute(const Matrix& lower, std::span<const double> b);
Vector backward_substitute_transposed(const Matrix& lower, std::span<const double> y);

bool is_symmetric(const Matrix& a, double tol);

}  // namespace scorelab
