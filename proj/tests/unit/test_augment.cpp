#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "scorelab/augment.hpp"
#include "scorelab/errors.hpp"
#include "scorelab/gaussian.hpp"

using namespace scorelab;

namespace {

using Pt = std::array<double, 2>;

double cross(const Pt& o, const Pt& a, const Pt& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain, counter-clockwise.
std::vector<Pt> hull(const Matrix& m) {
    std::vector<Pt> p;
    for (std::size_t i = 0; i < m.rows(); ++i) p.push_back({m(i, 0), m(i, 1)});
    std::sort(p.begin(), p.end());
    std::vector<Pt> h(2 * p.size());
    std::size_t k = 0;
    for (const Pt& q : p) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], q) <= 0) --k;
        h[k++] = q;
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    return h;
}

bool inside(const std::vector<Pt>& h, double x, double y, double tol = 1e-9) {
    for (std::size_t i = 0; i < h.size(); ++i)
        if (cross(h[i], h[(i + 1) % h.size()], {x, y}) < -tol) return false;
    return true;
}

Matrix cloud(std::uint64_t seed, std::size_t n, std::size_t d) {
    RngStream rng(seed);
    Matrix m(n, d);
    for (double& v : m.data()) v = rng.normal();
    return m;
}

}  // namespace

TEST_CASE("smote on two points stays on their segment") {
    RngStream rng(1);
    const Matrix out = smote(Matrix{{0.0, 0.0}, {1.0, 1.0}}, 1, 500, rng);
    REQUIRE(out.rows() == 500);
    for (std::size_t i = 0; i < out.rows(); ++i) {
        CHECK(out(i, 0) == out(i, 1));
        CHECK(out(i, 0) >= 0.0);
        CHECK(out(i, 0) <= 1.0);
    }
    CHECK(smote(Matrix{{0.0, 0.0}, {1.0, 1.0}}, 1, 0, rng).rows() == 0);
}

TEST_CASE("smote input checks") {
    RngStream rng(1);
    CHECK_THROWS_AS(smote(Matrix{{0.0, 0.0}}, 1, 5, rng), InvalidArgument);
    CHECK_THROWS_AS(smote(Matrix{{0.0}, {1.0}, {2.0}}, 3, 5, rng), InvalidArgument);
    CHECK_THROWS_AS(smote(Matrix{{0.0}, {1.0}, {2.0}}, 0, 5, rng), InvalidArgument);
}

TEST_CASE("smote outputs lie in the minority convex hull") {
    const Matrix pts = cloud(3, 60, 2);
    RngStream rng(4);
    const Matrix out = smote(pts, 5, 10000, rng);
    const auto h = hull(pts);
    std::size_t outside = 0;
    for (std::size_t i = 0; i < out.rows(); ++i) outside += !inside(h, out(i, 0), out(i, 1));
    CHECK(outside == 0);

    const Matrix p5 = cloud(5, 40, 5);
    const Matrix o5 = smote(p5, 3, 5000, rng);
    for (std::size_t c = 0; c < 5; ++c) {
        const Vector col = p5.column(c), oc = o5.column(c);
        CHECK(*std::min_element(oc.begin(), oc.end()) >= *std::min_element(col.begin(), col.end()));
        CHECK(*std::max_element(oc.begin(), oc.end()) <= *std::max_element(col.begin(), col.end()));
    }
}

TEST_CASE("nearest neighbours order and ties") {
    const auto nn = nearest_neighbours(Matrix{{0.0}, {1.0}, {-1.0}, {3.0}}, 2);
    CHECK(nn[0] == std::vector<std::size_t>{1, 2});
    CHECK(nn[3] == std::vector<std::size_t>{1, 0});
}

TEST_CASE("largest-remainder allocation") {
    CHECK(allocate_largest_remainder(Vector{0.2, 0.8}, 10) == std::vector<std::size_t>{2, 8});
    CHECK(allocate_largest_remainder(Vector{1.0, 1.0, 1.0}, 10) == std::vector<std::size_t>{4, 3, 3});
    std::vector<std::string> warn;
    CHECK(allocate_largest_remainder(Vector{0.0, 0.0}, 3, &warn) == std::vector<std::size_t>{2, 1});
    CHECK(warn.size() == 1);
    RngStream rng(6);
    for (int t = 0; t < 500; ++t) {
        Vector w(1 + rng.index(30));
        for (double& v : w) v = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
        const std::size_t n = rng.index(5000);
        const auto c = allocate_largest_remainder(w, n);
        std::size_t sum = 0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            sum += c[i];
            double total = 0;
            for (double v : w) total += v;
            if (total > 0) CHECK(std::abs(static_cast<double>(c[i]) - w[i] / total * n) < 1.0);
        }
        CHECK(sum == n);
    }
}

TEST_CASE("adasyn difficulty and allocation") {
    // Row 0 sits among minority rows; row 3 is surrounded by majority rows.
    const Matrix minority{{0.0, 0.0}, {0.1, 0.0}, {0.0, 0.1}, {10.0, 10.0}};
    const Matrix majority{{10.1, 10.0}, {10.0, 10.1}, {9.9, 10.0}, {-50.0, -50.0}};
    const Vector diff = adasyn_difficulty(minority, majority, 2);
    CHECK(diff[0] == 0.0);
    CHECK(diff[3] == 1.0);
    RngStream rng(2);
    const Matrix out = adasyn(minority, majority, 1, 12, rng);
    CHECK(out.rows() == 12);
    std::vector<std::string> warn;
    const Matrix far_out = adasyn(Matrix{{0.0}, {1.0}}, Matrix{{100.0}}, 1, 4, rng, &warn);
    CHECK(far_out.rows() == 4);
    CHECK(warn.size() == 1);
}

TEST_CASE("oversamplers are deterministic under a seed") {
    const Matrix minority = cloud(8, 30, 3), majority = cloud(9, 100, 3);
    RngStream a(5), b(5);
    CHECK(smote(minority, 5, 200, a) == smote(minority, 5, 200, b));
    RngStream c(5), d(5);
    CHECK(adasyn(minority, majority, 5, 200, c) == adasyn(minority, majority, 5, 200, d));
}

TEST_CASE("score oversampling extrapolates beyond the minority hull") {
    const Matrix minority = cloud(10, 128, 2);
    TrainConfig tc;
    tc.layer_sizes = {2, 32, 32, 2};
    tc.epochs = 300;
    tc.learning_rate = 0.01;
    tc.seed = 3;
    LangevinConfig lc;
    lc.length = 20;
    lc.discard_rate = 0.9;
    lc.step = 0.01;
    lc.seed = 4;
    std::vector<std::string> log;
    const Matrix out = score_oversample(minority, tc, lc, 2002, &log);
    REQUIRE(out.rows() == 2002);
    CHECK(out.all_finite());
    const auto h = hull(minority);
    std::size_t outside = 0;
    for (std::size_t i = 0; i < out.rows(); ++i) outside += !inside(h, out(i, 0), out(i, 1));
    CHECK(static_cast<double>(outside) / out.rows() >= 0.01);
    CHECK(score_oversample(minority, tc, lc, 2002) == out);
}

TEST_CASE("augment flags synthetic rows and keeps the originals") {
    LabeledDataset d = LabeledDataset::from_classes(cloud(11, 50, 2), cloud(12, 8, 2));
    AugmentPlan plan;
    plan.method = AugmentMethod::Smote;
    plan.k = 3;
    plan.n_new = 20;
    plan.seed = 1;
    const AugmentResult r = augment(d, plan);
    REQUIRE(r.data.size() == 78);
    for (std::size_t i = 0; i < 58; ++i) {
        CHECK(r.data.synthetic[i] == 0);
        CHECK(r.data.labels[i] == d.labels[i]);
    }
    for (std::size_t i = 58; i < 78; ++i) {
        CHECK(r.data.synthetic[i] == 1);
        CHECK(r.data.labels[i] == 1);
    }
    CHECK(std::equal(d.features.data().begin(), d.features.data().end(), r.data.features.data().begin()));
    CHECK(parse_augment_method("adasyn") == AugmentMethod::Adasyn);
    CHECK_THROWS_AS(parse_augment_method("rose"), InvalidArgument);
}
