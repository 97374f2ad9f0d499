#pragma once

#include <cstdint>
#include <vector>

#include "scorelab/dataset.hpp"
#include "scorelab/matrix.hpp"
#include "scorelab/rng.hpp"

namespace scorelab {

// N(mu, Sigma) with the Cholesky factor, inverse and determinant cached at
// construction. Immutable afterwards.
class GaussianModel {
public:
    GaussianModel() = default;
    GaussianModel(Vector mean, Matrix covariance);
    static GaussianModel univariate(double mean, double stddev);

    std::size_t dim() const { return mean_.size(); }
    const Vector& mean() const { return mean_; }
    const Matrix& covariance() const { return cov_; }
    const Matrix& cholesky_factor() const { return chol_; }
    const Matrix& precision() const { return prec_; }
    double determinant() const { return det_; }
    double log_determinant() const { return logdet_; }

    double pdf(std::span<const double> x) const;
    double log_pdf(std::span<const double> x) const;
    // Sigma^{-1} (mu - x)
    Vector score(std::span<const double> x) const;
    // Density at the mode, 1 / ((2 pi)^{d/2} |Sigma|^{1/2}).
    double peak_density() const;
    // mu + L z
    Vector sample(RngStream& rng) const;

private:
    Vector mean_;
    Matrix cov_, chol_, prec_;
    double det_ = 1.0, logdet_ = 0.0;
};

inline constexpr double kCovarianceJitter = 1e-9;

// Sample mean and population covariance; adds kCovarianceJitter * I when the
// estimate is not numerically positive definite.
GaussianModel estimate_moments(const Matrix& samples);

// Standard normal CDF.
double normal_cdf(double z);

struct MixtureComponent {
    double weight = 1.0;
    GaussianModel model;
};

struct ClassSpec {
    std::vector<MixtureComponent> components;
    std::size_t count = 0;
};

enum class NoiseScope { Overall, PerClass };

struct DgpSpec {
    ClassSpec class0, class1;
    // Fraction of labels flipped. Overall: round(rate * n) rows drawn from the
    // whole dataset. PerClass: round(rate_c * n_c) rows inside each class,
    // rates taken from class_noise.
    double noise_rate = 0.0;
    NoiseScope noise_scope = NoiseScope::Overall;
    double class_noise[2] = {0.0, 0.0};
    std::uint64_t seed = 0;

    void validate() const;
};

// Rows are class 0 first, then class 1. Flipped row indices are recorded in
// the dataset's `flipped` field.
LabeledDataset simulate(const DgpSpec& dgp);

// Flips the labels of exactly `count` distinct rows (drawn from `candidates`
// if given, otherwise from all rows). Returns the flipped indices, sorted.
std::vector<std::size_t> flip_labels(LabeledDataset& data, std::size_t count, RngStream& rng,
                                     const std::vector<std::size_t>* candidates = nullptr);

struct BoundaryValue {
    double be = 0.0;   // log p1(x) - log p0(x)
    Vector gradient;   // d be / dx
};
BoundaryValue qda_boundary(const GaussianModel& m0, const GaussianModel& m1, std::span<const double> x);

// Real roots of be(x) = 0 in one dimension, ascending. Empty when the
// densities never cross.
std::vector<double> boundary_roots_1d(const GaussianModel& m0, const GaussianModel& m1);

struct MisclassOptions {
    bool monte_carlo = false;  // forced on for d > 1
    std::size_t draws = 1000000;
    std::uint64_t seed = 0;
};
// Probability that a draw from `m` lands beyond the boundary point x*, i.e.
// on the far side from mu in at least one coordinate.
double misclass_prob(const GaussianModel& m, std::span<const double> boundary_point, const MisclassOptions& opt = {});

// log C with p1(x)/p0(x) = C exp(-1/2 x^T (P1 - P0) x + (mu1^T P1 - mu0^T P0) x).
double ratio_constant(const GaussianModel& m0, const GaussianModel& m1);

// Ready-made data generating processes.
DgpSpec gauss1d_dgp(std::uint64_t seed);
DgpSpec gauss2d_dgp(std::uint64_t seed);
// 10-dimensional imbalanced stand-in (2830 negatives, 170 positives): two
// overlapping anisotropic Gaussians. The generating parameters are this
// library's own choice; see docs/dgp.md.
DgpSpec imbalanced10d_dgp(std::uint64_t seed);

}  // namespace scorelab
