#include <cmath>
#include <numbers>
#include <string>

#include "scorelab/classify.hpp"
#include "scorelab/errors.hpp"
#include "scorelab/gaussian.hpp"
#include "scorelab/linalg.hpp"

namespace scorelab {

void DecisionConfig::validate() const {
    if (!(margin >= 0.0) || !std::isfinite(margin)) throw InvalidArgument("soft margin must be finite and >= 0");
    if (priors) {
        const auto& p = *priors;
        if (!(p[0] > 0.0) || !(p[1] > 0.0)) throw InvalidArgument("priors must be positive");
        if (std::abs(p[0] + p[1] - 1.0) > 1e-12) throw InvalidArgument("priors must sum to 1");
    }
}

std::array<double, 2> resolve_priors(const DecisionConfig& cfg, const LabeledDataset* train) {
    cfg.validate();
    if (cfg.priors) return *cfg.priors;
    if (!train || train->size() == 0) throw InvalidArgument("empirical priors need a training set");
    const double n1 = static_cast<double>(train->count(1));
    const double n = static_cast<double>(train->size());
    if (n1 == 0.0 || n1 == n) throw InvalidArgument("empirical priors need both classes present");
    return {(n - n1) / n, n1 / n};
}

Vector generative_posterior(std::span<const double> densities, std::span<const double> priors) {
    if (densities.size() != priors.size()) throw DimensionError("one prior per class density required");
    Vector post(densities.size());
    double total = 0.0;
    for (std::size_t j = 0; j < densities.size(); ++j) {
        if (!(densities[j] >= 0.0)) throw InvalidArgument("class densities must be >= 0");
        total += (post[j] = densities[j] * priors[j]);
    }
    if (!(total > 0.0)) throw InvalidArgument("posterior undefined: every class density is zero");
    if (!std::isfinite(total)) throw InvalidArgument("posterior undefined: densities overflow");
    for (double& v : post) v /= total;
    return post;
}

int decide_binary(double p1, double p0, const DecisionConfig& cfg) {
    if (cfg.rule == DecisionRule::AbsoluteGap) return p1 - p0 >= cfg.margin ? 1 : 0;
    if (p0 == 0.0) return p1 > 0.0 ? 1 : (cfg.margin <= 0.0 ? 1 : 0);
    if (p1 == 0.0) return 0;
    return std::log(p1) - std::log(p0) >= cfg.margin ? 1 : 0;
}

Vector newton_raphson_boundary(const ScalarFn& fn, const GradientFn& grad, std::span<const double> x_init,
                               const NewtonOptions& opt) {
    Vector x(x_init.begin(), x_init.end());
    double r = fn(x);
    for (std::size_t it = 0;; ++it) {
        if (!std::isfinite(r)) throw ConvergenceError("newton-raphson left the finite reals", r);
        if (std::abs(r) < opt.tolerance) return x;
        if (it == opt.max_iter)
            throw ConvergenceError("newton-raphson did not converge in " + std::to_string(opt.max_iter) + " iterations",
                                   r);
        const Vector g = grad(x);
        if (g.size() != x.size()) throw DimensionError("gradient size does not match the point");
        const double gg = dot(g, g);
        if (!(gg > 0.0)) throw ConvergenceError("stationary gradient in newton-raphson", r);
        const double t = r / gg;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= t * g[i];
        r = fn(x);
    }
}

GaussianAssumedDensity GaussianAssumedDensity::from_linear_net(const ScoreNet& net, const Matrix& samples) {
    if (net.layers().size() != 1) throw InvalidArgument("gaussian-assumption pathway needs a single affine layer");
    const DenseLayer& layer = net.layers().front();
    if (layer.weights.rows() != layer.weights.cols()) throw DimensionError("affine score must map R^d to R^d");
    if (samples.cols() != layer.weights.cols()) throw DimensionError("samples do not match the net's input size");
    GaussianAssumedDensity g;
    g.a = layer.weights;
    g.b = layer.bias;
    const GaussianModel moments = estimate_moments(samples);
    g.mean = moments.mean();
    const std::size_t d = g.mean.size();
    g.log_normalizer = 0.5 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi) + 0.5 * moments.log_determinant();
    return g;
}

double GaussianAssumedDensity::energy(std::span<const double> x) const {
    const Vector ax = matvec(a, x);
    const Vector am = matvec(a, mean);
    return -0.5 * dot(x, ax) - dot(b, x) + 0.5 * dot(mean, am) + dot(b, mean);
}

Vector GaussianAssumedDensity::score(std::span<const double> x) const {
    Vector s = matvec(a, x);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += b[i];
    return s;
}

ScalarFn generative_boundary_fn(const GaussianAssumedDensity& c0, const GaussianAssumedDensity& c1) {
    return [c0, c1](std::span<const double> x) { return c1.log_density(x) - c0.log_density(x); };
}

GradientFn generative_boundary_grad(const GaussianAssumedDensity& c0, const GaussianAssumedDensity& c1) {
    return [c0, c1](std::span<const double> x) { return subtract(c1.score(x), c0.score(x)); };
}

namespace {

double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

}  // namespace

DiscriminativeFields discriminative_score_fields(double f0, std::span<const double> grad_f0, double f1,
                                                 std::span<const double> grad_f1) {
    if (grad_f0.size() != grad_f1.size()) throw DimensionError("gradient sizes differ");
    const std::size_t d = grad_f0.size();
    // exp(-f1) / Z = sigmoid(f0 - f1), exp(-f0) / Z = sigmoid(f1 - f0)
    const double w0 = sigmoid(f0 - f1);
    const double w1 = sigmoid(f1 - f0);
    DiscriminativeFields out{Vector(d), Vector(d), Vector(d), Vector(d)};
    for (std::size_t i = 0; i < d; ++i) {
        const double diff = grad_f1[i] - grad_f0[i];
        out.s0[i] = diff * w0;
        out.s1[i] = -diff * w1;
        out.grad_p0[i] = diff * w0 * w1;
        out.grad_p1[i] = -out.grad_p0[i];
    }
    return out;
}

double LogisticModel::logit(std::span<const double> x) const {
    if (x.size() != dim()) throw DimensionError("logistic input has the wrong dimension");
    double t = theta[0];
    for (std::size_t i = 0; i < x.size(); ++i) t += theta[i + 1] * x[i];
    return t;
}

double LogisticModel::prob1(std::span<const double> x) const { return sigmoid(logit(x)); }

DiscriminativeFields LogisticModel::fields(std::span<const double> x) const {
    const Vector g0 = slope();
    const Vector g1(g0.size(), 0.0);
    return discriminative_score_fields(logit(x), g0, 0.0, g1);
}

Prediction pseudo_pdf_contrast(const ScoreField& field0, const ScoreField& field1, std::span<const double> x,
                               double eta) {
    const double q0 = 1.0 / (norm(field0(x)) + eta);
    const double q1 = 1.0 / (norm(field1(x)) + eta);
    Prediction p;
    p.label = q1 > q0 ? 1 : 0;
    p.confidence = std::max(q0, q1) / (q0 + q1);
    if (!std::isfinite(p.confidence)) p.confidence = q0 == q1 ? 0.5 : 1.0;
    return p;
}

GenerativePrediction generative_classify(const std::array<ScoreField, 2>& fields, const std::array<Anchor, 2>& anchors,
                                         const std::array<double, 2>& priors, std::span<const double> x,
                                         std::size_t n_points, const DecisionConfig& rule) {
    GenerativePrediction out;
    double log_dens[2];
    for (int c = 0; c < 2; ++c) {
        if (!(anchors[c].p0 > 0.0)) throw InvalidArgument("anchor density must be positive");
        log_dens[c] = std::log(anchors[c].p0) + line_integral(fields[c], anchors[c].x0, x, n_points);
        out.density[c] = std::exp(log_dens[c]);
    }
    // Posteriors in log space so that two underflowing densities still compare.
    const double l0 = log_dens[0] + std::log(priors[0]);
    const double l1 = log_dens[1] + std::log(priors[1]);
    if (!std::isfinite(l0) || !std::isfinite(l1)) throw InvalidArgument("class log densities are not finite");
    const double m = std::max(l0, l1);
    const double e0 = std::exp(l0 - m), e1 = std::exp(l1 - m);
    out.posterior = {e0 / (e0 + e1), e1 / (e0 + e1)};
    DecisionConfig zero = rule;
    zero.margin = 0.0;
    out.label = decide_binary(out.posterior[1], out.posterior[0], zero);
    return out;
}

}  // namespace scorelab
