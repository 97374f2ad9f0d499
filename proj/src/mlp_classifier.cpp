#include <cmath>
#include <numeric>

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

// Adds d(BCE)/d(params) for one row into grads; returns the row's loss.
double backprop(const ScoreNet& net, std::span<const double> x, int y, std::vector<DenseLayer>& grads,
                std::vector<Vector>& acts) {
    const auto& layers = net.layers();
    const std::size_t depth = layers.size();
    acts.resize(depth + 1);
    acts[0].assign(x.begin(), x.end());
    for (std::size_t l = 0; l < depth; ++l) {
        acts[l + 1] = matvec(layers[l].weights, acts[l]);
        for (std::size_t i = 0; i < acts[l + 1].size(); ++i) {
            acts[l + 1][i] += layers[l].bias[i];
            if (l + 1 < depth) acts[l + 1][i] = std::max(acts[l + 1][i], 0.0);
        }
    }
    const double z = acts[depth][0];
    const double loss = log1p_exp(z) - (y == 1 ? z : 0.0);
    Vector delta{sigmoid(z) - static_cast<double>(y)};
    for (std::size_t l = depth; l-- > 0;) {
        const Matrix& w = layers[l].weights;
        const Vector& in = acts[l];
        for (std::size_t i = 0; i < w.rows(); ++i) {
            grads[l].bias[i] += delta[i];
            auto gr = grads[l].weights.row(i);
            for (std::size_t j = 0; j < w.cols(); ++j) gr[j] += delta[i] * in[j];
        }
        if (l == 0) break;
        Vector prev(w.cols(), 0.0);
        for (std::size_t i = 0; i < w.rows(); ++i)
            for (std::size_t j = 0; j < w.cols(); ++j) prev[j] += w(i, j) * delta[i];
        for (std::size_t j = 0; j < prev.size(); ++j)
            if (in[j] <= 0.0) prev[j] = 0.0;
        delta = std::move(prev);
    }
    return loss;
}

}  // namespace

MlpClassifier MlpClassifier::fit(const LabeledDataset& data, const MlpClassifierConfig& cfg) {
    data.validate();
    if (data.size() == 0) throw InvalidArgument("classifier needs training rows");
    if (cfg.batch_size == 0 || !(cfg.learning_rate > 0.0) || cfg.momentum < 0.0 || cfg.momentum >= 1.0)
        throw InvalidArgument("invalid classifier config");
    std::vector<std::size_t> sizes{data.dim()};
    sizes.insert(sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
    sizes.push_back(1);

    RngStream root(cfg.seed);
    RngStream init = root.split(0), order_rng = root.split(1);
    MlpClassifier m;
    m.net_ = ScoreNet::glorot(sizes, init);
    auto& layers = m.net_.layers();
    std::vector<DenseLayer> grads = layers, velocity = layers;
    for (auto& v : velocity) {
        std::fill(v.weights.data().begin(), v.weights.data().end(), 0.0);
        std::fill(v.bias.begin(), v.bias.end(), 0.0);
    }
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<Vector> acts;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle(order, order_rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
            for (auto& g : grads) {
                std::fill(g.weights.data().begin(), g.weights.data().end(), 0.0);
                std::fill(g.bias.begin(), g.bias.end(), 0.0);
            }
            for (std::size_t b = start; b < stop; ++b) {
                const std::size_t i = order[b];
                epoch_loss += backprop(m.net_, data.features.row(i), data.labels[i], grads, acts);
            }
            const double scale = cfg.learning_rate / static_cast<double>(stop - start);
            for (std::size_t l = 0; l < layers.size(); ++l) {
                auto vw = velocity[l].weights.data();
                auto gw = grads[l].weights.data();
                auto pw = layers[l].weights.data();
                for (std::size_t k = 0; k < pw.size(); ++k) pw[k] += (vw[k] = cfg.momentum * vw[k] - scale * gw[k]);
                for (std::size_t k = 0; k < layers[l].bias.size(); ++k)
                    layers[l].bias[k] +=
                        (velocity[l].bias[k] = cfg.momentum * velocity[l].bias[k] - scale * grads[l].bias[k]);
            }
        }
        epoch_loss /= static_cast<double>(data.size());
        if (!std::isfinite(epoch_loss) || !m.net_.all_finite())
            throw DivergenceError("classifier training diverged at epoch " + std::to_string(epoch), epoch);
        m.loss_.push_back(epoch_loss);
    }
    return m;
}

double MlpClassifier::prob1(std::span<const double> x) const { return sigmoid(net_.forward(x)[0]); }

int MlpClassifier::predict(std::span<const double> x, double threshold) const {
    return prob1(x) >= threshold ? 1 : 0;
}

std::vector<int> MlpClassifier::predict(const Matrix& x, double threshold) const {
    std::vector<int> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict(x.row(i), threshold);
    return out;
}

}  // namespace scorelab
