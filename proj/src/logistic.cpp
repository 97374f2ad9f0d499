#include <cmath>
#include <string>

#include "scorelab/classify.hpp"
#include "scorelab/errors.hpp"

namespace scorelab {

namespace {

double log1p_exp(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

// Parameters on standardized features mapped back to raw coordinates.
Vector to_raw(const Vector& w, const Standardization& st) {
    Vector theta(w.size());
    theta[0] = w[0];
    for (std::size_t j = 1; j < w.size(); ++j) {
        theta[j] = w[j] / st.stddev[j - 1];
        theta[0] -= theta[j] * st.mean[j - 1];
    }
    return theta;
}

}  // namespace

// Ascent runs on z-scored features, which leaves the maximizer unchanged but
// evens out the curvature; the learning rate refers to that scale.
LogisticFit logistic_fit(const LabeledDataset& data, const LogisticConfig& cfg) {
    data.validate();
    if (data.count(0) == 0 || data.count(1) == 0) throw InvalidArgument("logistic_fit needs both labels present");
    if (!(cfg.learning_rate > 0.0) || !(cfg.max_norm > 0.0)) throw InvalidArgument("invalid logistic config");
    const ZScoreResult z = zscore(data);
    const Matrix& x = z.scaled.features;
    const std::size_t n = x.rows(), d = x.cols();
    const double inv_n = 1.0 / static_cast<double>(n);

    LogisticFit fit;
    Vector w(d + 1, 0.0), g(d + 1);
    bool capped = false;
    for (fit.epochs_run = 0; fit.epochs_run < cfg.epochs; ++fit.epochs_run) {
        std::fill(g.begin(), g.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto xi = x.row(i);
            double t = w[0];
            for (std::size_t j = 0; j < d; ++j) t += w[j + 1] * xi[j];
            const double r = static_cast<double>(data.labels[i]) - sigmoid(t);
            g[0] += r;
            for (std::size_t j = 0; j < d; ++j) g[j + 1] += r * xi[j];
        }
        for (double& v : g) v *= inv_n;
        if (norm(g) < cfg.tolerance) break;
        for (std::size_t j = 0; j <= d; ++j) w[j] += cfg.learning_rate * g[j];
        const double raw_norm = norm(to_raw(w, z.params));
        if (raw_norm > cfg.max_norm) {
            for (double& v : w) v *= cfg.max_norm / raw_norm;
            capped = true;
            ++fit.epochs_run;
            break;
        }
    }
    fit.model.theta = to_raw(w, z.params);

    bool separated = true;
    double log_lik = 0.0;
    for (std::size_t i = 0; i < n && separated; ++i) {
        const double t = fit.model.logit(data.features.row(i));
        separated = data.labels[i] == 1 ? t > 0.0 : t < 0.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double t = fit.model.logit(data.features.row(i));
        log_lik += data.labels[i] == 1 ? -log1p_exp(-t) : -log1p_exp(t);
    }
    if (capped)
        fit.warnings.push_back("coefficient norm reached the cap " + std::to_string(cfg.max_norm) +
                               "; the maximum-likelihood estimate does not exist");
    else if (separated)
        fit.warnings.push_back("classes are perfectly separated; coefficients keep growing with more epochs");
    if (!capped && fit.epochs_run == cfg.epochs && !separated)
        fit.warnings.push_back("gradient ascent stopped at the epoch limit before reaching tolerance");
    if (!std::isfinite(log_lik)) throw DivergenceError("logistic log-likelihood is not finite", fit.epochs_run);
    return fit;
}

}  // namespace scorelab
