#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "scorelab/classify.hpp"
#include "scorelab/errors.hpp"
#include "scorelab/gaussian.hpp"
#include "scorelab/linalg.hpp"

using namespace scorelab;

namespace {

const Matrix kSigma0{{1.0, -0.5}, {-0.5, 1.0}};
const Matrix kSigma1{{1.0, 0.5}, {0.5, 1.0}};

// Exact Gaussian-assumption density of N(mu, sigma): A = -sigma^-1, b = sigma^-1 mu.
GaussianAssumedDensity exact_assumed(const Vector& mu, const Matrix& sigma) {
    const SpdInverse inv = spd_inverse_det(sigma);
    GaussianAssumedDensity g;
    g.a = -1.0 * inv.inverse;
    g.b = matvec(inv.inverse, mu);
    g.mean = mu;
    g.log_normalizer = 0.5 * static_cast<double>(mu.size()) * std::log(2 * std::numbers::pi) + 0.5 * inv.log_determinant;
    return g;
}

// Smooth test energies f(x) = c + sum_i a_i sin(w_i x_i) + q |x|^2.
struct SmoothF {
    double c, q;
    Vector a, w;
    double value(std::span<const double> x) const {
        double v = c;
        for (std::size_t i = 0; i < x.size(); ++i) v += a[i] * std::sin(w[i] * x[i]) + q * x[i] * x[i];
        return v;
    }
    Vector grad(std::span<const double> x) const {
        Vector g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = a[i] * w[i] * std::cos(w[i] * x[i]) + 2 * q * x[i];
        return g;
    }
};

SmoothF random_f(RngStream& rng, std::size_t d) {
    SmoothF f{rng.uniform(-1, 1), rng.uniform(0.05, 0.5), {}, {}};
    for (std::size_t i = 0; i < d; ++i) {
        f.a.push_back(rng.uniform(-2, 2));
        f.w.push_back(rng.uniform(0.3, 2));
    }
    return f;
}

bool within_one_cell(const std::vector<int>& truth, std::size_t nx, std::size_t ny, std::size_t i, std::size_t j) {
    for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
            const long a = static_cast<long>(i) + di, b = static_cast<long>(j) + dj;
            if (a < 0 || b < 0 || a >= static_cast<long>(nx) || b >= static_cast<long>(ny)) continue;
            if (truth[a * ny + b] != truth[i * ny + j]) return true;
        }
    return false;
}

}  // namespace

TEST_CASE("posterior examples") {
    const Vector eq = generative_posterior(Vector{0.2, 0.2}, Vector{0.5, 0.5});
    CHECK(eq[0] == doctest::Approx(0.5));
    CHECK(eq[1] == doctest::Approx(0.5));
    // 0.1 * 0.943 / (0.0943 + 0.0171)
    const Vector imb = generative_posterior(Vector{0.1, 0.3}, Vector{0.943, 0.057});
    CHECK(imb[0] == doctest::Approx(0.0943 / 0.1114).epsilon(1e-12));
    CHECK(imb[0] == doctest::Approx(0.8465).epsilon(1e-4));
    CHECK(imb[1] == doctest::Approx(0.1535).epsilon(1e-3));
    const Vector zero = generative_posterior(Vector{0.0, 0.3}, Vector{0.5, 0.5});
    CHECK(zero[0] == 0.0);
    CHECK(zero[1] == 1.0);
    CHECK_THROWS_AS(generative_posterior(Vector{0.0, 0.0}, Vector{0.5, 0.5}), InvalidArgument);
}

TEST_CASE("posteriors sum to one") {
    RngStream rng(7);
    for (int t = 0; t < 1000; ++t) {
        const double p = rng.uniform(0.01, 0.99);
        const Vector post = generative_posterior(Vector{rng.uniform() * 10, rng.uniform() * 1e-3}, Vector{p, 1 - p});
        CHECK(std::abs(post[0] + post[1] - 1.0) < 1e-12);
    }
}

TEST_CASE("decision config validation and empirical priors") {
    DecisionConfig cfg;
    cfg.priors = std::array<double, 2>{0.943, 0.057};
    CHECK_NOTHROW(cfg.validate());
    cfg.priors = std::array<double, 2>{0.5, 0.6};
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg.priors.reset();
    cfg.margin = -0.1;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg.margin = 0.0;
    LabeledDataset d;
    for (int i = 0; i < 3; ++i) d.append(Vector{double(i)}, 0);
    d.append(Vector{9.0}, 1);
    const auto pr = resolve_priors(cfg, &d);
    CHECK(pr[0] == 0.75);
    CHECK(pr[1] == 0.25);
}

TEST_CASE("decide_binary examples") {
    DecisionConfig cfg;
    CHECK(decide_binary(0.3, 0.3, cfg) == 1);
    cfg.margin = 0.2;
    CHECK(decide_binary(0.6, 0.5, cfg) == 0);
    CHECK(decide_binary(0.8, 0.5, cfg) == 1);
    cfg.rule = DecisionRule::LogRatio;
    cfg.margin = 0.0;
    CHECK(decide_binary(0.1, 0.0, cfg) == 1);
    CHECK(decide_binary(0.0, 0.1, cfg) == 0);
    CHECK(decide_binary(0.2, 0.2, cfg) == 1);
    cfg.margin = std::log(2.0) + 1e-9;
    CHECK(decide_binary(0.2, 0.1, cfg) == 0);
}

TEST_CASE("raising the margin never turns a 0 into a 1") {
    RngStream rng(11);
    for (int t = 0; t < 2000; ++t) {
        const double p1 = rng.uniform(), p0 = rng.uniform();
        DecisionConfig lo, hi;
        lo.margin = rng.uniform(0, 0.5);
        hi.margin = lo.margin + rng.uniform(0, 0.5);
        if (decide_binary(p1, p0, lo) == 0) CHECK(decide_binary(p1, p0, hi) == 0);
    }
}

TEST_CASE("log-ratio decisions ignore a common density scale") {
    RngStream rng(12);
    DecisionConfig cfg;
    cfg.rule = DecisionRule::LogRatio;
    for (int t = 0; t < 2000; ++t) {
        const double p1 = rng.uniform(), p0 = rng.uniform(), c = std::exp(rng.uniform(-20, 20));
        CHECK(decide_binary(p1, p0, cfg) == decide_binary(c * p1, c * p0, cfg));
    }
}

TEST_CASE("newton-raphson: symmetric 1D gaussians meet at the midpoint") {
    const auto c0 = exact_assumed({-2.0}, Matrix{{1.0}});
    const auto c1 = exact_assumed({2.0}, Matrix{{1.0}});
    NewtonOptions opt;
    opt.tolerance = 1e-12;
    for (double start : {-3.0, -0.5, 0.7, 4.0}) {
        const Vector x = newton_raphson_boundary(generative_boundary_fn(c0, c1), generative_boundary_grad(c0, c1),
                                                 Vector{start}, opt);
        CHECK(std::abs(x[0]) < 1e-9);
    }
}

TEST_CASE("newton-raphson agrees with the exact 1D roots") {
    const GaussianModel m0 = GaussianModel::univariate(-1.0, 1.0);
    const GaussianModel m1 = GaussianModel::univariate(1.5, 2.0);
    const auto roots = boundary_roots_1d(m0, m1);
    REQUIRE(roots.size() == 2);
    const auto c0 = exact_assumed({-1.0}, Matrix{{1.0}});
    const auto c1 = exact_assumed({1.5}, Matrix{{4.0}});
    for (double r : roots) {
        const Vector x = newton_raphson_boundary(generative_boundary_fn(c0, c1), generative_boundary_grad(c0, c1),
                                                 Vector{r + 0.3});
        CHECK(x[0] == doctest::Approx(r).epsilon(1e-8));
    }
}

TEST_CASE("newton-raphson 2D points lie on the quadratic boundary") {
    const GaussianModel m0({0.0, 0.0}, kSigma0), m1({4.0, 4.0}, kSigma1);
    const auto c0 = exact_assumed({0.0, 0.0}, kSigma0);
    const auto c1 = exact_assumed({4.0, 4.0}, kSigma1);
    RngStream rng(5);
    for (int t = 0; t < 20; ++t) {
        const Vector init{rng.uniform(-1, 5), rng.uniform(-1, 5)};
        const Vector x = newton_raphson_boundary(generative_boundary_fn(c0, c1), generative_boundary_grad(c0, c1), init);
        CHECK(std::abs(qda_boundary(m0, m1, x).be) < 1e-6);
    }
}

TEST_CASE("newton-raphson residual bound and failure modes") {
    RngStream rng(9);
    NewtonOptions opt;
    opt.tolerance = 1e-9;
    for (int t = 0; t < 200; ++t) {
        const double a = rng.uniform(0.5, 2), c = rng.uniform(0.1, 3);
        const ScalarFn fn = [=](std::span<const double> x) { return a * (x[0] * x[0] + x[1] * x[1]) - c; };
        const GradientFn gr = [=](std::span<const double> x) { return Vector{2 * a * x[0], 2 * a * x[1]}; };
        const Vector x = newton_raphson_boundary(fn, gr, Vector{rng.uniform(0.2, 3), rng.uniform(0.2, 3)}, opt);
        CHECK(std::abs(fn(x)) < opt.tolerance);
    }
    const ScalarFn bowl = [](std::span<const double> x) { return x[0] * x[0] + 1.0; };
    const GradientFn bowl_grad = [](std::span<const double> x) { return Vector{2 * x[0]}; };
    CHECK_THROWS_AS(newton_raphson_boundary(bowl, bowl_grad, Vector{0.0}), ConvergenceError);
    NewtonOptions few;
    few.max_iter = 5;
    try {
        newton_raphson_boundary(bowl, bowl_grad, Vector{1.0}, few);
        FAIL("expected non-convergence");
    } catch (const ConvergenceError& e) {
        CHECK(e.residual() >= 1.0);
    }
}

TEST_CASE("gaussian-assumption density from a linear net") {
    const Matrix samples{{-1.0, 0.0}, {1.0, 0.0}, {0.0, 2.0}, {0.0, -2.0}};
    const ScoreNet net = ScoreNet::affine(Matrix{{-1.0, 0.0}, {0.0, -0.25}}, Vector{0.0, 0.0});
    const auto g = GaussianAssumedDensity::from_linear_net(net, samples);
    // Moments: mean 0, covariance diag(0.5, 2); f(0) = 0.
    CHECK(g.energy(Vector{0.0, 0.0}) == doctest::Approx(0.0));
    CHECK(g.log_normalizer == doctest::Approx(std::log(2 * std::numbers::pi)));
    CHECK(g.energy(Vector{1.0, 2.0}) == doctest::Approx(0.5 + 0.5));
    const Vector s = g.score(Vector{1.0, 2.0});
    CHECK(s[0] == doctest::Approx(-1.0));
    CHECK(s[1] == doctest::Approx(-0.5));
    const ScoreNet deep = ScoreNet(std::vector<std::size_t>{2, 4, 2});
    CHECK_THROWS_AS(GaussianAssumedDensity::from_linear_net(deep, samples), InvalidArgument);
}

TEST_CASE("logistic score fields at the boundary") {
    const LogisticModel m{{-0.1, 3.5}};
    const double xb = 0.1 / 3.5;
    const auto f = m.fields(Vector{xb});
    CHECK(f.s0[0] == doctest::Approx(-1.75));
    CHECK(f.s1[0] == doctest::Approx(1.75));
    CHECK(m.prob1(Vector{xb}) == doctest::Approx(0.5));
}

TEST_CASE("indistinguishable classes have zero fields") {
    const auto f = discriminative_score_fields(0.7, Vector{1.0, -2.0}, 0.7, Vector{1.0, -2.0});
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(f.s0[i] == 0.0);
        CHECK(f.s1[i] == 0.0);
        CHECK(f.grad_p0[i] == 0.0);
    }
}

TEST_CASE("discriminative identities and finite differences") {
    RngStream rng(21);
    for (int t = 0; t < 200; ++t) {
        const SmoothF f0 = random_f(rng, 3), f1 = random_f(rng, 3);
        const Vector x{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const auto fl = discriminative_score_fields(f0.value(x), f0.grad(x), f1.value(x), f1.grad(x));
        const Vector g0 = f0.grad(x), g1 = f1.grad(x);
        const double ratio = -std::exp(f0.value(x) - f1.value(x));
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(std::abs((fl.s0[i] - fl.s1[i]) - (g1[i] - g0[i])) < 1e-9);
            if (std::abs(fl.s1[i]) > 1e-6) CHECK(fl.s0[i] / fl.s1[i] == doctest::Approx(ratio).epsilon(1e-9));
            CHECK(fl.grad_p1[i] == -fl.grad_p0[i]);
        }
        // central differences of p0 = exp(-f0) / (exp(-f0) + exp(-f1))
        const auto p0 = [&](Vector y) { return 1.0 / (1.0 + std::exp(f0.value(y) - f1.value(y))); };
        const double h = 1e-5;
        for (std::size_t i = 0; i < 3; ++i) {
            Vector a = x, b = x;
            a[i] += h;
            b[i] -= h;
            CHECK(std::abs((p0(a) - p0(b)) / (2 * h) - fl.grad_p0[i]) < 1e-6);
        }
    }
}

TEST_CASE("logistic score norms sum to |theta'| while the density gradient peaks at the boundary") {
    const LogisticModel m{{-0.1, 3.5}};
    const double lo = -3.0, step = 0.01;
    double best = -1.0, arg = 0.0;
    for (int i = 0; i <= 600; ++i) {
        const double x = lo + step * i;
        const auto f = m.fields(Vector{x});
        CHECK(std::abs(f.s0[0]) + std::abs(f.s1[0]) == doctest::Approx(3.5));
        const double g = std::abs(f.grad_p0[0]) + std::abs(f.grad_p1[0]);
        if (g > best) best = g, arg = x;
    }
    CHECK(std::abs(arg - 0.1 / 3.5) <= step);
}

TEST_CASE("logistic fit on 1D gaussian data") {
    const LabeledDataset data = simulate(gauss1d_dgp(42));
    const LogisticFit fit = logistic_fit(data);
    const double boundary = -fit.model.theta[0] / fit.model.theta[1];
    CHECK(boundary >= -0.15);
    CHECK(boundary <= 0.15);
    CHECK(fit.model.theta[1] > 2.0);
    const LogisticFit again = logistic_fit(data);
    CHECK(again.model.theta == fit.model.theta);
}

TEST_CASE("logistic fit without signal") {
    RngStream rng(3);
    LabeledDataset d;
    for (int i = 0; i < 40000; ++i) d.append(Vector{rng.normal(), rng.normal()}, static_cast<int>(rng.index(2)));
    const LogisticFit fit = logistic_fit(d);
    CHECK(norm(fit.model.slope()) < 0.05);
}

// Single draws scatter by several degrees (the classes are nearly separable),
// so the reference direction is compared with the median over datasets.
TEST_CASE("logistic fit on 2D gaussian data tracks the reference line") {
    std::vector<double> deviations;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Vector w = logistic_fit(simulate(gauss2d_dgp(seed))).model.slope();
        const double angle = std::atan2(w[1], w[0]) - std::atan2(2.0, 1.73);
        deviations.push_back(std::abs(angle) * 180.0 / std::numbers::pi);
    }
    std::nth_element(deviations.begin(), deviations.begin() + 10, deviations.end());
    CHECK(deviations[10] < 5.0);
}

TEST_CASE("separable data caps the coefficients and warns") {
    LabeledDataset d;
    for (int i = 0; i < 20; ++i) d.append(Vector{-1.0 - 0.1 * i}, 0);
    for (int i = 0; i < 20; ++i) d.append(Vector{1.0 + 0.1 * i}, 1);
    LogisticConfig cfg;
    cfg.learning_rate = 50.0;
    cfg.epochs = 200000;
    const LogisticFit fit = logistic_fit(d, cfg);
    CHECK(norm(fit.model.theta) <= cfg.max_norm * (1 + 1e-12));
    REQUIRE(!fit.warnings.empty());
    const LogisticFit short_fit = logistic_fit(d);
    CHECK(!short_fit.warnings.empty());
    CHECK(std::isfinite(short_fit.model.theta[1]));
}

TEST_CASE("voting basics") {
    LabeledDataset lone;
    lone.append(Vector{1.0, 2.0}, 1);
    const Prediction p = vote_classify(lone, Vector{1.0, 2.0}, VoteConfig{VoteMode::FixedK, 0.0, 1});
    CHECK(p.label == 1);
    CHECK(p.confidence == 1.0);

    LabeledDataset tie;
    tie.append(Vector{-1.0, 0.0}, 1);
    tie.append(Vector{1.0, 0.0}, 0);
    tie.append(Vector{9.0, 9.0}, 1);
    const Prediction t = vote_classify(tie, Vector{0.0, 0.0}, VoteConfig{VoteMode::FixedK, 0.0, 2});
    CHECK(t.label == 0);
    CHECK(t.confidence == 0.5);
    const Prediction r = vote_classify(tie, Vector{0.0, 0.0}, VoteConfig{VoteMode::FixedRadius, 1.0, 0});
    CHECK(r.label == 0);
    CHECK(r.confidence == 0.5);
    const Prediction none = vote_classify(tie, Vector{4.0, -4.0}, VoteConfig{VoteMode::FixedRadius, 1.0, 0});
    CHECK(none.label == -1);
    const Prediction wide = vote_classify(tie, Vector{0.0, 0.0}, VoteConfig{VoteMode::FixedRadius, 20.0, 0});
    CHECK(wide.label == 1);
    CHECK(wide.confidence == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(vote_classify(tie, Vector{0.0, 0.0}, VoteConfig{VoteMode::FixedK, 0.0, 0}), InvalidArgument);

    const auto batch = vote_classify(tie, Matrix{{0.0, 0.0}, {4.0, -4.0}}, VoteConfig{VoteMode::FixedRadius, 1.0, 0});
    std::ostringstream out;
    write_predictions_csv(Matrix{{0.0, 0.0}, {4.0, -4.0}}, batch, out);
    CHECK(out.str() == "x0,x1,label,confidence\n0,0,0,0.5\n4,-4,-1,0\n");
}

TEST_CASE("voting on dense samples follows the true boundary") {
    const GaussianModel m0({0.0, 0.0}, kSigma0), m1({4.0, 4.0}, kSigma1);
    RngStream rng(8);
    LabeledDataset train;
    for (int i = 0; i < 3000; ++i) {
        train.append(m0.sample(rng), 0);
        train.append(m1.sample(rng), 1);
    }
    std::size_t wrong = 0, total = 0;
    for (double x = -1.0; x <= 5.0; x += 0.25)
        for (double y = -1.0; y <= 5.0; y += 0.25) {
            const Vector q{x, y};
            const int truth = qda_boundary(m0, m1, q).be >= 0 ? 1 : 0;
            wrong += vote_classify(train, q, VoteConfig{VoteMode::FixedK, 0.0, 15}).label != truth;
            ++total;
        }
    CHECK(static_cast<double>(wrong) / total < 0.05);
}

TEST_CASE("pseudo-pdf contrast") {
    const ScoreField same{1, [](std::span<const double>) { return Vector{2.0}; }};
    const Prediction tie = pseudo_pdf_contrast(same, same, Vector{0.0});
    CHECK(tie.label == 0);
    CHECK(tie.confidence == 0.5);
    const GaussianModel m0 = GaussianModel::univariate(-2, 1), m1 = GaussianModel::univariate(2, 1);
    const Prediction at_mode =
        pseudo_pdf_contrast(ScoreField::from_gaussian(m0), ScoreField::from_gaussian(m1), Vector{2.0});
    CHECK(at_mode.label == 1);
    CHECK(at_mode.confidence > 0.999);
}

TEST_CASE("pseudo-pdf contrast near the means agrees with the true densities") {
    const GaussianModel m0({0.0, 0.0}, kSigma0), m1({4.0, 4.0}, kSigma1);
    const ScoreField f0 = ScoreField::from_gaussian(m0), f1 = ScoreField::from_gaussian(m1);
    RngStream rng(31);
    std::size_t agree = 0;
    const std::size_t n = 2000;
    for (std::size_t i = 0; i < n; ++i) {
        const GaussianModel& m = i % 2 ? m1 : m0;
        Vector x;
        do x = m.sample(rng);
        while (std::sqrt(squared_distance(x, m.mean())) > 1.0);
        const int truth = m1.pdf(x) > m0.pdf(x) ? 1 : 0;
        agree += pseudo_pdf_contrast(f0, f1, x).label == truth;
    }
    CHECK(static_cast<double>(agree) / n > 0.9);
}

TEST_CASE("generative classification") {
    const GaussianModel m0({0.0, 0.0}, kSigma0), m1({4.0, 4.0}, kSigma1);
    const std::array<ScoreField, 2> fields{ScoreField::from_gaussian(m0), ScoreField::from_gaussian(m1)};
    const std::array<Anchor, 2> anchors{Anchor{{0.0, 0.0}, 0.18}, Anchor{{4.0, 4.0}, 0.18}};

    const auto at1 = generative_classify(fields, {Anchor{{0.0, 0.0}, 1e-6}, Anchor{{4.0, 4.0}, 0.5}}, {0.5, 0.5},
                                         Vector{4.0, 4.0});
    CHECK(at1.label == 1);

    const std::size_t nx = 41, ny = 41;
    std::vector<int> truth(nx * ny), eq(nx * ny), imb(nx * ny);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) {
            const Vector x{-2.0 + 0.2 * i, -2.0 + 0.2 * j};
            truth[i * ny + j] = qda_boundary(m0, m1, x).be >= 0 ? 1 : 0;
            const auto g = generative_classify(fields, anchors, {0.5, 0.5}, x, 50);
            CHECK(g.posterior[0] + g.posterior[1] == doctest::Approx(1.0));
            eq[i * ny + j] = g.label;
            imb[i * ny + j] = generative_classify(fields, anchors, {0.943, 0.057}, x, 50).label;
        }
    std::size_t off = 0, flips = 0;
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) {
            const std::size_t k = i * ny + j;
            if (eq[k] != truth[k] && !within_one_cell(truth, nx, ny, i, j)) ++off;
            CHECK(!(eq[k] == 0 && imb[k] == 1));
            flips += eq[k] == 1 && imb[k] == 0;
        }
    CHECK(off == 0);
    CHECK(flips > 0);
}

TEST_CASE("mlp classifier learns a nonlinear boundary deterministically") {
    RngStream rng(4);
    LabeledDataset d;
    for (int i = 0; i < 600; ++i) {
        const Vector x{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        d.append(x, x[0] * x[0] + x[1] * x[1] < 1.5 ? 1 : 0);
    }
    MlpClassifierConfig cfg;
    cfg.hidden = {16, 16};
    cfg.epochs = 150;
    cfg.batch_size = 32;
    cfg.seed = 1;
    const MlpClassifier a = MlpClassifier::fit(d, cfg);
    const auto pred = a.predict(d.features);
    std::size_t hit = 0;
    for (std::size_t i = 0; i < d.size(); ++i) hit += pred[i] == d.labels[i];
    CHECK(static_cast<double>(hit) / d.size() > 0.93);
    CHECK(a.loss_history().back() < a.loss_history().front());
    const MlpClassifier b = MlpClassifier::fit(d, cfg);
    CHECK(a.network() == b.network());
}
