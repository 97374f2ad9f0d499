#include <cmath>
#include <numeric>
#include <string>

#include "scorelab/errors.hpp"
#include "scorelab/score_net.hpp"

namespace scorelab {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
        throw InvalidArgument("learning rate must be a positive finite number");
    if (objective == Objective::SlicedScoreMatching && n_slices == 0)
        throw InvalidArgument("sliced score matching needs n_slices >= 1");
}

namespace {

constexpr std::size_t kPlateauWindow = 10;

void sgd_step(ScoreNet& net, const LossGradient& g, double lr) {
    auto& layers = net.layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
        auto w = layers[l].weights.data();
        const auto gw = g.gradients[l].weights.data();
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= lr * gw[i];
        auto& b = layers[l].bias;
        const auto& gb = g.gradients[l].bias;
        for (std::size_t i = 0; i < b.size(); ++i) b[i] -= lr * gb[i];
    }
}

Matrix gather(const Matrix& data, const std::vector<std::size_t>& idx, std::size_t begin, std::size_t end) {
    Matrix m(end - begin, data.cols());
    for (std::size_t r = begin; r < end; ++r) {
        const auto src = data.row(idx[r]);
        std::copy(src.begin(), src.end(), m.row(r - begin).begin());
    }
    return m;
}

}  // namespace

TrainResult train(const Matrix& data, const TrainConfig& cfg) {
    cfg.validate();
    RngStream init = RngStream(cfg.seed).split(0);
    std::vector<std::size_t> sizes = cfg.layer_sizes;
    if (sizes.empty()) sizes = {data.cols(), data.cols()};
    return train(data, cfg, ScoreNet::glorot(sizes, init));
}

TrainResult train(const Matrix& data, const TrainConfig& cfg, ScoreNet initial) {
    cfg.validate();
    if (data.rows() < 2) throw InvalidArgument("training needs at least two samples");
    if (data.cols() != initial.input_dim()) throw DimensionError("training data width does not match the net");
    if (!data.all_finite()) throw InvalidArgument("training data contains non-finite values");

    TrainResult res;
    res.net = std::move(initial);
    RngStream order = RngStream(cfg.seed).split(1);
    RngStream slices = RngStream(cfg.seed).split(2);

    const std::size_t n = data.rows();
    const std::size_t bs = (cfg.batch_size == 0 || cfg.batch_size > n) ? n : cfg.batch_size;
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});

    double best_window = INFINITY;
    std::size_t since_best = 0;
    res.loss_history.reserve(cfg.epochs);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (bs < n) shuffle(idx, order);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < n; start += bs) {
            const std::size_t end = std::min(n, start + bs);
            const Matrix batch = bs == n ? data : gather(data, idx, start, end);
            LossGradient g;
            if (cfg.objective == Objective::ScoreMatching) {
                g = sm_gradients(res.net, batch);
            } else {
                const SliceSet s = draw_slices(batch.rows(), batch.cols(), cfg.n_slices, cfg.slice_distribution, slices);
                g = ssm_gradients(res.net, batch, s);
            }
            if (!std::isfinite(g.loss))
                throw DivergenceError("score net training diverged at epoch " + std::to_string(epoch), epoch);
            epoch_loss += g.loss * static_cast<double>(end - start);
            sgd_step(res.net, g, cfg.learning_rate);
        }
        if (!res.net.all_finite())
            throw DivergenceError("score net parameters became non-finite at epoch " + std::to_string(epoch), epoch);
        res.loss_history.push_back(epoch_loss / static_cast<double>(n));
        res.epochs_run = epoch + 1;

        if (cfg.plateau_patience > 0 && res.loss_history.size() >= kPlateauWindow) {
            const auto tail = res.loss_history.end() - kPlateauWindow;
            const double window = std::accumulate(tail, res.loss_history.end(), 0.0) / kPlateauWindow;
            if (window < best_window - cfg.plateau_tolerance) {
                best_window = window;
                since_best = 0;
            } else if (++since_best >= cfg.plateau_patience) {
                res.stopped_on_plateau = true;
                break;
            }
        }
    }
    return res;
}

}  // namespace scorelab
