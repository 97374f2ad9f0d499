#include <doctest.h>

#include <cmath>
#include <numbers>

#include "scorelab/gaussian.hpp"

using namespace scorelab;

namespace {

const Matrix kSigma0{{1.0, -0.5}, {-0.5, 1.0}};
const Matrix kSigma1{{1.0, 0.5}, {0.5, 1.0}};

// Direct pdf oracle for d <= 2, written out without the cached factor.
double pdf2(const Vector& mu, const Matrix& s, const Vector& x) {
    if (mu.size() == 1) {
        const double v = s(0, 0);
        return std::exp(-0.5 * (x[0] - mu[0]) * (x[0] - mu[0]) / v) / std::sqrt(2 * std::numbers::pi * v);
    }
    const double det = s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
    const double i00 = s(1, 1) / det, i11 = s(0, 0) / det, i01 = -s(0, 1) / det;
    const double a = x[0] - mu[0], b = x[1] - mu[1];
    const double q = i00 * a * a + 2 * i01 * a * b + i11 * b * b;
    return std::exp(-0.5 * q) / (2 * std::numbers::pi * std::sqrt(det));
}

}  // namespace

TEST_CASE("gaussian pdf hand values") {
    CHECK(GaussianModel::univariate(0.0, 1.0).pdf(Vector{0.0}) == doctest::Approx(1.0 / std::sqrt(2 * std::numbers::pi)));
    const GaussianModel g0({0.0, 0.0}, kSigma0);
    CHECK(g0.pdf(Vector{0.0, 0.0}) == doctest::Approx(1.0 / (2 * std::numbers::pi * std::sqrt(0.75))));
    CHECK(g0.peak_density() == doctest::Approx(0.18378).epsilon(1e-4));
    const double far = GaussianModel::univariate(0.0, 1.0).pdf(Vector{20.0});
    CHECK(std::isfinite(far));
    CHECK(far >= 0.0);
    CHECK(far < 1e-80);
}

TEST_CASE("gaussian pdf agrees with a direct formula") {
    RngStream rng(3);
    const GaussianModel g1({4.0, 4.0}, kSigma1);
    for (int t = 0; t < 50; ++t) {
        const Vector x{rng.uniform(0, 8), rng.uniform(0, 8)};
        CHECK(g1.pdf(x) == doctest::Approx(pdf2({4.0, 4.0}, kSigma1, x)).epsilon(1e-12));
    }
}

TEST_CASE("gaussian pdf integrates to one") {
    const GaussianModel g = GaussianModel::univariate(1.0, 2.0);
    const std::size_t n = 2001;
    const double lo = 1.0 - 12.0, h = 24.0 / (n - 1);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (i == 0 || i == n - 1 ? 0.5 : 1.0) * g.pdf(Vector{lo + h * i});
    CHECK(std::abs(s * h - 1.0) < 1e-3);

    const GaussianModel g2({0.0, 0.0}, kSigma0);
    const std::size_t m = 241;
    const double h2 = 12.0 / (m - 1);
    double s2 = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const double w = (i == 0 || i == m - 1 ? 0.5 : 1.0) * (j == 0 || j == m - 1 ? 0.5 : 1.0);
            s2 += w * g2.pdf(Vector{-6.0 + h2 * i, -6.0 + h2 * j});
        }
    CHECK(std::abs(s2 * h2 * h2 - 1.0) < 1e-3);
}

TEST_CASE("gaussian score hand values") {
    const GaussianModel g0({0.0, 0.0}, kSigma0);
    CHECK(g0.score(Vector{0.0, 0.0}) == Vector{0.0, 0.0});
    const Vector s = g0.score(Vector{1.0, 0.0});
    CHECK(s[0] == doctest::Approx(-4.0 / 3));
    CHECK(s[1] == doctest::Approx(-2.0 / 3));
    CHECK(GaussianModel::univariate(2.0, 1.0).score(Vector{0.0})[0] == doctest::Approx(2.0));
}

TEST_CASE("gaussian score is the gradient of log pdf") {
    RngStream rng(8);
    const GaussianModel g1({4.0, 4.0}, kSigma1);
    for (int t = 0; t < 30; ++t) {
        const Vector x{rng.uniform(1, 7), rng.uniform(1, 7)};
        const Vector s = g1.score(x);
        for (std::size_t j = 0; j < 2; ++j) {
            Vector xp = x, xm = x;
            xp[j] += 1e-5;
            xm[j] -= 1e-5;
            const double fd = (g1.log_pdf(xp) - g1.log_pdf(xm)) / 2e-5;
            CHECK(std::abs(fd - s[j]) <= 1e-6 * std::max(1.0, std::abs(s[j])));
        }
    }
}

TEST_CASE("estimate_moments hand examples and jitter") {
    const GaussianModel m = estimate_moments(Matrix{{0.0, 0.0}, {2.0, 2.0}});
    CHECK(m.mean() == Vector{1.0, 1.0});
    CHECK(m.covariance()(0, 1) == doctest::Approx(1.0));
    CHECK(m.covariance()(0, 0) == doctest::Approx(1.0 + kCovarianceJitter));

    const GaussianModel r = estimate_moments(Matrix{{3.0, -1.0}, {3.0, -1.0}, {3.0, -1.0}});
    CHECK(r.covariance()(0, 0) == doctest::Approx(kCovarianceJitter));
    CHECK(r.covariance()(0, 1) == 0.0);
}

TEST_CASE("estimate_moments recovers the 2D class-0 process") {
    DgpSpec spec = gauss2d_dgp(10);
    spec.class0.count = 20000;
    spec.class1.count = 0;
    const GaussianModel m = estimate_moments(simulate(spec).features);
    CHECK(std::abs(m.mean()[0]) < 0.15);
    CHECK(std::abs(m.mean()[1]) < 0.15);
    CHECK(max_abs_diff(m.covariance(), kSigma0) < 0.15);
}

TEST_CASE("simulate counts, determinism and label noise") {
    const LabeledDataset d = simulate(gauss1d_dgp(1));
    CHECK(d.size() == 2000);
    CHECK(d.count(0) == 1000);
    CHECK(d.count(1) == 1000);
    CHECK(d.features == simulate(gauss1d_dgp(1)).features);
    CHECK_FALSE(d.features == simulate(gauss1d_dgp(2)).features);

    DgpSpec empty = gauss1d_dgp(1);
    empty.class0.count = empty.class1.count = 0;
    CHECK(simulate(empty).size() == 0);

    DgpSpec all = gauss1d_dgp(1);
    all.noise_scope = NoiseScope::PerClass;
    all.class_noise[1] = 1.0;
    const LabeledDataset f = simulate(all);
    CHECK(f.count(0) == 2000);
    CHECK(f.flipped.size() == 1000);

    DgpSpec some = gauss1d_dgp(4);
    some.noise_rate = 0.0137;
    const LabeledDataset g = simulate(some);
    CHECK(g.flipped.size() == 27);  // round(0.0137 * 2000)
    std::size_t changed = 0;
    for (std::size_t i = 0; i < g.size(); ++i) changed += g.labels[i] != (i < 1000 ? 0 : 1);
    CHECK(changed == 27);
}

TEST_CASE("qda boundary identities") {
    const GaussianModel g0({0.0, 0.0}, kSigma0), g1({4.0, 4.0}, kSigma1);
    const auto same = qda_boundary(g0, g0, Vector{1.3, -0.2});
    CHECK(same.be == doctest::Approx(0.0));
    CHECK(same.gradient[0] == doctest::Approx(0.0));

    const auto mid = qda_boundary(GaussianModel::univariate(-2, 1), GaussianModel::univariate(2, 1), Vector{0.0});
    CHECK(mid.be == doctest::Approx(0.0));

    RngStream rng(2);
    for (int t = 0; t < 100; ++t) {
        const Vector x{rng.uniform(-3, 7), rng.uniform(-3, 7)};
        const auto b = qda_boundary(g0, g1, x);
        CHECK(std::abs(b.be - (std::log(pdf2({4, 4}, kSigma1, x)) - std::log(pdf2({0, 0}, kSigma0, x)))) < 1e-10);
        CHECK(qda_boundary(g1, g0, x).be == doctest::Approx(-b.be));
        for (std::size_t j = 0; j < 2; ++j) {
            Vector xp = x, xm = x;
            xp[j] += 1e-6;
            xm[j] -= 1e-6;
            const double fd = (qda_boundary(g0, g1, xp).be - qda_boundary(g0, g1, xm).be) / 2e-6;
            CHECK(fd == doctest::Approx(b.gradient[j]).epsilon(1e-6));
        }
    }
}

TEST_CASE("1D boundary roots") {
    const auto eq = boundary_roots_1d(GaussianModel::univariate(-2, 1), GaussianModel::univariate(2, 1));
    REQUIRE(eq.size() == 1);
    CHECK(eq[0] == doctest::Approx(0.0));

    const GaussianModel a = GaussianModel::univariate(0, 1), b = GaussianModel::univariate(0, 2);
    const auto r = boundary_roots_1d(a, b);
    REQUIRE(r.size() == 2);
    for (double x : r) CHECK(std::abs(qda_boundary(a, b, Vector{x}).be) < 1e-9);

    RngStream rng(5);
    for (int t = 0; t < 50; ++t) {
        const GaussianModel m0 = GaussianModel::univariate(rng.uniform(-3, 3), rng.uniform(0.3, 3));
        const GaussianModel m1 = GaussianModel::univariate(rng.uniform(-3, 3), rng.uniform(0.3, 3));
        for (double x : boundary_roots_1d(m0, m1)) CHECK(std::abs(qda_boundary(m0, m1, Vector{x}).be) < 1e-9);
    }
}

TEST_CASE("equal covariances give the linear boundary") {
    const Matrix cov{{1.5, 0.3}, {0.3, 0.8}};
    const GaussianModel g0({-1.0, 0.5}, cov), g1({2.0, 1.5}, cov);
    const Matrix p = g0.precision();
    RngStream rng(4);
    for (int t = 0; t < 20; ++t) {
        // Bisect along a random vertical line for a root of be.
        const double x0 = rng.uniform(-3, 3);
        double lo = -50, hi = 50;
        const double flo = qda_boundary(g0, g1, Vector{x0, lo}).be;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double f = qda_boundary(g0, g1, Vector{x0, mid}).be;
            ((f > 0) == (flo > 0) ? lo : hi) = mid;
        }
        const Vector x{x0, 0.5 * (lo + hi)};
        CHECK(std::abs(qda_boundary(g0, g1, x).be) < 1e-9);
        // (mu1 - mu0)^T P x = 1/2 (mu1^T P mu1 - mu0^T P mu0)
        const Vector dm = subtract(g1.mean(), g0.mean());
        const double lhs = dot(dm, matvec(p, x));
        const double rhs = 0.5 * (dot(g1.mean(), matvec(p, g1.mean())) - dot(g0.mean(), matvec(p, g0.mean())));
        CHECK(std::abs(lhs - rhs) < 1e-9);
    }
}

TEST_CASE("misclassification probability") {
    const GaussianModel g = GaussianModel::univariate(-2, 1);
    CHECK(misclass_prob(g, Vector{0.0}) == doctest::Approx(0.0227501).epsilon(1e-5));
    CHECK(misclass_prob(g, Vector{-2.0}) == doctest::Approx(0.5));
    CHECK(misclass_prob(GaussianModel::univariate(2, 1), Vector{0.0}) == doctest::Approx(0.0227501).epsilon(1e-5));
    MisclassOptions mc;
    mc.monte_carlo = true;
    mc.seed = 17;
    CHECK(std::abs(misclass_prob(g, Vector{0.0}, mc) - misclass_prob(g, Vector{0.0})) < 0.002);
    const double p2 = misclass_prob(GaussianModel({0.0, 0.0}, kSigma0), Vector{2.0, 2.0}, mc);
    CHECK(p2 > 0.0);
    CHECK(p2 < 1.0);
}

TEST_CASE("ratio constant") {
    const GaussianModel g0({0.0, 0.0}, kSigma0), g1({4.0, 4.0}, kSigma1);
    CHECK(ratio_constant(g0, g0) == doctest::Approx(0.0));
    CHECK(ratio_constant(g0, g1) == doctest::Approx(-32.0 / 3));
    CHECK(ratio_constant(g1, g0) == doctest::Approx(32.0 / 3));

    // R(x) = C exp(-1/2 x^T (P1 - P0) x + (mu1^T P1 - mu0^T P0) x)
    const GaussianModel h0({0.5, -1.0}, Matrix{{2.0, 0.3}, {0.3, 0.5}}), h1({1.0, 2.0}, kSigma1);
    const double logc = ratio_constant(h0, h1);
    RngStream rng(6);
    for (int t = 0; t < 50; ++t) {
        const Vector x{rng.uniform(-2, 3), rng.uniform(-2, 3)};
        const Matrix dp = h1.precision() - h0.precision();
        const Vector l1 = matvec(h1.precision(), h1.mean()), l0 = matvec(h0.precision(), h0.mean());
        const double expo = -0.5 * dot(x, matvec(dp, x)) + dot(l1, x) - dot(l0, x);
        const double exact = std::log(pdf2(h1.mean(), h1.covariance(), x) / pdf2(h0.mean(), h0.covariance(), x));
        CHECK(std::abs(logc + expo - exact) < 1e-9);
    }
}
