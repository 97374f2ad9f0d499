#include "scorelab/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "scorelab/errors.hpp"
#include "scorelab/linalg.hpp"

namespace scorelab {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)

}  // namespace

GaussianModel::GaussianModel(Vector mean, Matrix covariance) : mean_(std::move(mean)), cov_(std::move(covariance)) {
    if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size())
        throw DimensionError("gaussian: covariance must be d x d for a mean of length d");
    chol_ = cholesky(cov_);
    const SpdInverse inv = spd_inverse_det(cov_);
    prec_ = inv.inverse;
    det_ = inv.determinant;
    logdet_ = inv.log_determinant;
}

GaussianModel GaussianModel::univariate(double mean, double stddev) {
    if (!(stddev > 0.0)) throw InvalidArgument("gaussian: standard deviation must be positive");
    return GaussianModel({mean}, Matrix{{stddev * stddev}});
}

double GaussianModel::log_pdf(std::span<const double> x) const {
    if (x.size() != dim()) throw DimensionError("gaussian: point has the wrong dimension");
    // Mahalanobis distance through the factor: |L^{-1}(x - mu)|^2.
    const Vector y = forward_substitute(chol_, subtract(x, mean_));
    return -0.5 * (static_cast<double>(dim()) * kLog2Pi + logdet_ + dot(y, y));
}

double GaussianModel::pdf(std::span<const double> x) const { return std::exp(log_pdf(x)); }

Vector GaussianModel::score(std::span<const double> x) const {
    if (x.size() != dim()) throw DimensionError("gaussian: point has the wrong dimension");
    return matvec(prec_, subtract(mean_, x));
}

double GaussianModel::peak_density() const {
    return std::exp(-0.5 * (static_cast<double>(dim()) * kLog2Pi + logdet_));
}

Vector GaussianModel::sample(RngStream& rng) const {
    const Vector z = standard_normal(rng, dim());
    Vector x = mean_;
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j <= i; ++j) x[i] += chol_(i, j) * z[j];
    return x;
}

GaussianModel estimate_moments(const Matrix& samples) {
    const std::size_t n = samples.rows(), d = samples.cols();
    if (n < 1 || d == 0) throw InvalidArgument("estimate_moments needs at least one sample");
    Vector mu(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) mu[j] += samples(i, j);
    for (double& m : mu) m /= static_cast<double>(n);
    Matrix cov(d, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < d; ++a) {
            const double da = samples(i, a) - mu[a];
            for (std::size_t b = 0; b <= a; ++b) cov(a, b) += da * (samples(i, b) - mu[b]);
        }
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b <= a; ++b) {
            cov(a, b) /= static_cast<double>(n);
            cov(b, a) = cov(a, b);
        }
    try {
        return GaussianModel(mu, cov);
    } catch (const DecompositionError&) {
        for (std::size_t a = 0; a < d; ++a) cov(a, a) += kCovarianceJitter;
        return GaussianModel(std::move(mu), std::move(cov));
    }
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

void DgpSpec::validate() const {
    for (const ClassSpec* c : {&class0, &class1}) {
        if (c->count > 0 && c->components.empty()) throw InvalidArgument("dgp: a class with samples needs a component");
        double total = 0.0;
        for (const auto& comp : c->components) {
            if (!(comp.weight >= 0.0)) throw InvalidArgument("dgp: mixture weights must be non-negative");
            total += comp.weight;
        }
        if (!c->components.empty() && !(total > 0.0)) throw InvalidArgument("dgp: mixture weights sum to zero");
    }
    if (class0.count > 0 && class1.count > 0 && class0.components[0].model.dim() != class1.components[0].model.dim())
        throw DimensionError("dgp: classes have different dimensions");
    for (double r : {noise_rate, class_noise[0], class_noise[1]})
        if (!(r >= 0.0 && r <= 1.0)) throw InvalidArgument("dgp: noise rate must be in [0, 1]");
}

namespace {

Matrix draw_class(const ClassSpec& c, RngStream& rng) {
    if (c.count == 0) return Matrix();
    const std::size_t d = c.components[0].model.dim();
    double total = 0.0;
    for (const auto& comp : c.components) total += comp.weight;
    Matrix out(c.count, d);
    for (std::size_t i = 0; i < c.count; ++i) {
        std::size_t k = 0;
        if (c.components.size() > 1) {
            double u = rng.uniform() * total;
            while (k + 1 < c.components.size() && u >= c.components[k].weight) u -= c.components[k++].weight;
        }
        const Vector x = c.components[k].model.sample(rng);
        std::copy(x.begin(), x.end(), out.row(i).begin());
    }
    return out;
}

std::size_t rounded(double rate, std::size_t n) {
    return static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
}

}  // namespace

std::vector<std::size_t> flip_labels(LabeledDataset& data, std::size_t count, RngStream& rng,
                                     const std::vector<std::size_t>* candidates) {
    std::vector<std::size_t> pool;
    if (candidates) {
        pool = *candidates;
    } else {
        pool.resize(data.size());
        std::iota(pool.begin(), pool.end(), std::size_t{0});
    }
    if (count > pool.size()) throw InvalidArgument("flip_labels: more flips requested than rows available");
    // Partial Fisher-Yates: the first `count` slots are a uniform draw without replacement.
    for (std::size_t i = 0; i < count; ++i) std::swap(pool[i], pool[i + rng.index(pool.size() - i)]);
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
    for (std::size_t i : pool) data.labels[i] = 1 - data.labels[i];
    return pool;
}

LabeledDataset simulate(const DgpSpec& dgp) {
    dgp.validate();
    RngStream root(dgp.seed);
    RngStream r0 = root.split(1), r1 = root.split(2), rn = root.split(3);
    const Matrix x0 = draw_class(dgp.class0, r0);
    const Matrix x1 = draw_class(dgp.class1, r1);
    LabeledDataset out;
    const std::size_t d = dgp.class0.count ? x0.cols() : x1.cols();
    out.features = Matrix(0, d);
    if (dgp.class0.count) out.append(x0, 0, false);
    if (dgp.class1.count) out.append(x1, 1, false);

    if (dgp.noise_scope == NoiseScope::Overall) {
        out.flipped = flip_labels(out, rounded(dgp.noise_rate, out.size()), rn);
    } else {
        std::vector<std::size_t> c0(dgp.class0.count), c1(dgp.class1.count);
        std::iota(c0.begin(), c0.end(), std::size_t{0});
        std::iota(c1.begin(), c1.end(), dgp.class0.count);
        auto f0 = flip_labels(out, rounded(dgp.class_noise[0], c0.size()), rn, &c0);
        auto f1 = flip_labels(out, rounded(dgp.class_noise[1], c1.size()), rn, &c1);
        out.flipped = std::move(f0);
        out.flipped.insert(out.flipped.end(), f1.begin(), f1.end());
    }
    return out;
}

BoundaryValue qda_boundary(const GaussianModel& m0, const GaussianModel& m1, std::span<const double> x) {
    if (m0.dim() != m1.dim() || x.size() != m0.dim()) throw DimensionError("qda_boundary: dimension mismatch");
    const std::size_t d = x.size();
    const Matrix& p0 = m0.precision();
    const Matrix& p1 = m1.precision();
    const Vector p0x = matvec(p0, x), p1x = matvec(p1, x);
    const Vector p0m = matvec(p0, m0.mean()), p1m = matvec(p1, m1.mean());
    BoundaryValue out;
    out.be = -0.5 * (dot(x, p1x) - dot(x, p0x)) + (dot(p1m, x) - dot(p0m, x)) +
             0.5 * (m0.log_determinant() - m1.log_determinant()) +
             0.5 * (dot(m0.mean(), p0m) - dot(m1.mean(), p1m));
    out.gradient.resize(d);
    for (std::size_t i = 0; i < d; ++i) out.gradient[i] = p0x[i] - p1x[i] + p1m[i] - p0m[i];
    return out;
}

std::vector<double> boundary_roots_1d(const GaussianModel& m0, const GaussianModel& m1) {
    if (m0.dim() != 1 || m1.dim() != 1) throw DimensionError("boundary_roots_1d needs one-dimensional models");
    const double v0 = m0.covariance()(0, 0), v1 = m1.covariance()(0, 0);
    const double mu0 = m0.mean()[0], mu1 = m1.mean()[0];
    // be(x) = a x^2 + b x + c
    const double a = -0.5 * (1.0 / v1 - 1.0 / v0);
    const double b = mu1 / v1 - mu0 / v0;
    const double c = 0.5 * std::log(v0 / v1) + 0.5 * (mu0 * mu0 / v0 - mu1 * mu1 / v1);
    if (std::abs(a) <= 1e-14 * (std::abs(b) + std::abs(c) + 1.0)) {
        if (b == 0.0) return {};
        return {-c / b};
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return {};
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    std::vector<double> roots;
    if (q != 0.0) {
        roots = {q / a, c / q};
    } else {
        roots = {0.0};
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

double misclass_prob(const GaussianModel& m, std::span<const double> xs, const MisclassOptions& opt) {
    if (xs.size() != m.dim()) throw DimensionError("misclass_prob: boundary point has the wrong dimension");
    const auto& mu = m.mean();
    if (m.dim() == 1 && !opt.monte_carlo) {
        const double z = (xs[0] - mu[0]) / std::sqrt(m.covariance()(0, 0));
        return xs[0] >= mu[0] ? 1.0 - normal_cdf(z) : normal_cdf(z);
    }
    if (opt.draws == 0) throw InvalidArgument("misclass_prob: Monte Carlo needs at least one draw");
    RngStream rng(opt.seed);
    std::size_t beyond = 0;
    for (std::size_t t = 0; t < opt.draws; ++t) {
        const Vector x = m.sample(rng);
        for (std::size_t j = 0; j < x.size(); ++j) {
            const bool above = xs[j] >= mu[j];
            if (above ? x[j] > xs[j] : x[j] < xs[j]) {
                ++beyond;
                break;
            }
        }
    }
    return static_cast<double>(beyond) / static_cast<double>(opt.draws);
}

double ratio_constant(const GaussianModel& m0, const GaussianModel& m1) {
    if (m0.dim() != m1.dim()) throw DimensionError("ratio_constant: dimension mismatch");
    const double q0 = dot(m0.mean(), matvec(m0.precision(), m0.mean()));
    const double q1 = dot(m1.mean(), matvec(m1.precision(), m1.mean()));
    return 0.5 * (m0.log_determinant() - m1.log_determinant()) + 0.5 * (q0 - q1);
}

DgpSpec gauss1d_dgp(std::uint64_t seed) {
    DgpSpec s;
    s.class0 = {{{1.0, GaussianModel::univariate(-2.0, 1.0)}}, 1000};
    s.class1 = {{{1.0, GaussianModel::univariate(2.0, 1.0)}}, 1000};
    s.seed = seed;
    return s;
}

DgpSpec gauss2d_dgp(std::uint64_t seed) {
    DgpSpec s;
    s.class0 = {{{1.0, GaussianModel({0.0, 0.0}, Matrix{{1.0, -0.5}, {-0.5, 1.0}})}}, 200};
    s.class1 = {{{1.0, GaussianModel({4.0, 4.0}, Matrix{{1.0, 0.5}, {0.5, 1.0}})}}, 200};
    s.seed = seed;
    return s;
}

DgpSpec imbalanced10d_dgp(std::uint64_t seed) {
    constexpr std::size_t d = 10;
    // Negatives: anisotropic, mild correlation between neighbouring coordinates.
    const double sd0[d] = {1.6, 1.4, 1.2, 1.1, 1.0, 1.0, 0.9, 0.9, 0.8, 0.8};
    Matrix cov0(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const double rho = i == j ? 1.0 : (i + 1 == j || j + 1 == i ? 0.3 : 0.0);
            cov0(i, j) = rho * sd0[i] * sd0[j];
        }
    // Positives: shifted along the leading coordinates, tighter and differently shaped.
    const double shift[d] = {1.2, 1.0, 0.9, 0.8, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1};
    const double sd1[d] = {0.8, 0.9, 0.7, 0.8, 0.7, 0.8, 0.6, 0.7, 0.6, 0.6};
    Matrix cov1(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const double rho = i == j ? 1.0 : (i + 1 == j || j + 1 == i ? -0.2 : 0.0);
            cov1(i, j) = rho * sd1[i] * sd1[j];
        }
    DgpSpec s;
    s.class0 = {{{1.0, GaussianModel(Vector(d, 0.0), cov0)}}, 2830};
    s.class1 = {{{1.0, GaussianModel(Vector(shift, shift + d), cov1)}}, 170};
    s.noise_rate = 0.0001;
    s.seed = seed;
    return s;
}

}  // namespace scorelab
