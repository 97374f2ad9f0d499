#include "scorelab/score_net.hpp"

#include <cmath>
#include <string>

#include "scorelab/errors.hpp"
#include "scorelab/simd.hpp"

namespace scorelab {

namespace {

void check_sizes(const std::vector<std::size_t>& sizes) {
    if (sizes.size() < 2) throw InvalidArgument("score net needs at least an input and an output layer");
    for (std::size_t s : sizes)
        if (s == 0) throw InvalidArgument("score net layer sizes must be positive");
}

void check_input(const ScoreNet& net, std::size_t n) {
    if (n != net.input_dim())
        throw DimensionError("score net expects input of length " + std::to_string(net.input_dim()) + ", got " +
                             std::to_string(n));
}

std::vector<DenseLayer> zero_like(const std::vector<DenseLayer>& layers) {
    std::vector<DenseLayer> out;
    out.reserve(layers.size());
    for (const auto& l : layers) out.push_back({Matrix(l.weights.rows(), l.weights.cols()), Vector(l.bias.size())});
    return out;
}

// Activations of one sample, kept for the backward passes.
struct ForwardCache {
    std::vector<Vector> act;  // act[0] = x, act[l+1] = output of layer l
    std::vector<Vector> pre;  // pre[l] = W_l act[l] + b_l
};

void run_forward(const ScoreNet& net, std::span<const double> x, ForwardCache& c) {
    const auto& k = simd::active();
    const auto& layers = net.layers();
    c.act.resize(layers.size() + 1);
    c.pre.resize(layers.size());
    c.act[0].assign(x.begin(), x.end());
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const Matrix& w = layers[l].weights;
        c.pre[l].resize(w.rows());
        k.gemv(w.data().data(), w.rows(), w.cols(), w.cols(), c.act[l].data(), layers[l].bias.data(), c.pre[l].data());
        c.act[l + 1] = c.pre[l];
        if (l + 1 < layers.size())
            for (double& v : c.act[l + 1]) v = v > 0.0 ? v : 0.0;
    }
}

// Per-sample objective 1/2 |s(x)|^2 + weight * sum_k v_k^T J v_k, where the
// directions v_k are the rows of `dirs` (k x d). With dirs = I and weight 1
// this is the score-matching integrand; with drawn slices and weight
// 1/n_slices it is the sliced one. If `grads` is non-null the parameter
// gradient of the integrand, scaled by `scale`, is accumulated into it.
double sample_objective(const ScoreNet& net, std::span<const double> x, const Matrix& dirs, double weight,
                        std::vector<DenseLayer>* grads, double scale) {
    const auto& k = simd::active();
    const auto& layers = net.layers();
    const std::size_t nl = layers.size();
    const std::size_t nd = dirs.rows();

    ForwardCache c;
    run_forward(net, x, c);
    const Vector& s = c.act[nl];
    double loss = 0.5 * k.dot(s.data(), s.data(), s.size());

    // Forward-mode tangents, stored one row per direction: tan[l] is nd x width(l).
    std::vector<Matrix> tan(nl + 1);
    tan[0] = dirs;
    for (std::size_t l = 0; l < nl; ++l) {
        const Matrix& w = layers[l].weights;
        tan[l + 1] = Matrix(nd, w.rows());
        for (std::size_t r = 0; r < nd; ++r) {
            double* out = tan[l + 1].row(r).data();
            k.gemv(w.data().data(), w.rows(), w.cols(), w.cols(), tan[l].row(r).data(), nullptr, out);
            if (l + 1 < nl)
                for (std::size_t i = 0; i < w.rows(); ++i)
                    if (!(c.pre[l][i] > 0.0)) out[i] = 0.0;
        }
    }
    for (std::size_t r = 0; r < nd; ++r) loss += weight * k.dot(dirs.row(r).data(), tan[nl].row(r).data(), dirs.cols());

    if (grads == nullptr) return loss;

    // Reverse pass over 1/2 |s|^2 (ordinary backprop).
    Vector g(s.begin(), s.end());
    for (std::size_t l = nl; l-- > 0;) {
        const Matrix& w = layers[l].weights;
        DenseLayer& gl = (*grads)[l];
        for (std::size_t i = 0; i < w.rows(); ++i) {
            if (g[i] == 0.0) continue;
            k.axpy(scale * g[i], c.act[l].data(), gl.weights.row(i).data(), w.cols());
            gl.bias[i] += scale * g[i];
        }
        if (l == 0) break;
        Vector prev(w.cols(), 0.0);
        for (std::size_t i = 0; i < w.rows(); ++i)
            if (g[i] != 0.0) k.axpy(g[i], w.row(i).data(), prev.data(), w.cols());
        for (std::size_t j = 0; j < prev.size(); ++j)
            if (!(c.pre[l - 1][j] > 0.0)) prev[j] = 0.0;
        g.swap(prev);
    }

    // Reverse pass over the directional-derivative term. The ReLU masks are
    // piecewise constant in the parameters, so only the linear maps carry
    // gradient and biases get none from this term.
    Matrix gt(nd, dirs.cols());
    for (std::size_t r = 0; r < nd; ++r)
        for (std::size_t j = 0; j < dirs.cols(); ++j) gt(r, j) = weight * dirs(r, j);
    for (std::size_t l = nl; l-- > 0;) {
        const Matrix& w = layers[l].weights;
        DenseLayer& gl = (*grads)[l];
        for (std::size_t r = 0; r < nd; ++r) {
            const double* gr = gt.row(r).data();
            const double* tr = tan[l].row(r).data();
            for (std::size_t i = 0; i < w.rows(); ++i)
                if (gr[i] != 0.0) k.axpy(scale * gr[i], tr, gl.weights.row(i).data(), w.cols());
        }
        if (l == 0) break;
        Matrix prev(nd, w.cols());
        for (std::size_t r = 0; r < nd; ++r) {
            double* pr = prev.row(r).data();
            const double* gr = gt.row(r).data();
            for (std::size_t i = 0; i < w.rows(); ++i)
                if (gr[i] != 0.0) k.axpy(gr[i], w.row(i).data(), pr, w.cols());
            for (std::size_t j = 0; j < w.cols(); ++j)
                if (!(c.pre[l - 1][j] > 0.0)) pr[j] = 0.0;
        }
        gt = std::move(prev);
    }
    return loss;
}

void check_batch(const ScoreNet& net, const Matrix& batch) {
    if (batch.rows() == 0) throw InvalidArgument("score matching needs a non-empty batch");
    if (batch.cols() != net.input_dim())
        throw DimensionError("batch has " + std::to_string(batch.cols()) + " columns, net expects " +
                             std::to_string(net.input_dim()));
    if (net.input_dim() != net.output_dim()) throw DimensionError("score objectives need input dim = output dim");
}

Matrix slice_block(const SliceSet& slices, std::size_t i, std::size_t d) {
    Matrix m(slices.per_sample, d);
    for (std::size_t k = 0; k < slices.per_sample; ++k) {
        const auto src = slices.directions.row(i * slices.per_sample + k);
        std::copy(src.begin(), src.end(), m.row(k).begin());
    }
    return m;
}

void check_slices(const Matrix& batch, const SliceSet& slices) {
    if (slices.per_sample == 0) throw InvalidArgument("sliced score matching needs at least one slice");
    if (slices.directions.rows() != batch.rows() * slices.per_sample || slices.directions.cols() != batch.cols())
        throw DimensionError("slice set does not match the batch");
}

}  // namespace

ScoreNet::ScoreNet(std::vector<std::size_t> layer_sizes) : sizes_(std::move(layer_sizes)) {
    check_sizes(sizes_);
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l)
        layers_.push_back({Matrix(sizes_[l + 1], sizes_[l]), Vector(sizes_[l + 1], 0.0)});
}

ScoreNet ScoreNet::glorot(std::vector<std::size_t> layer_sizes, RngStream& rng) {
    ScoreNet net(std::move(layer_sizes));
    for (auto& layer : net.layers_) {
        const double limit = std::sqrt(6.0 / static_cast<double>(layer.weights.rows() + layer.weights.cols()));
        for (double& w : layer.weights.data()) w = rng.uniform(-limit, limit);
    }
    return net;
}

ScoreNet ScoreNet::affine(const Matrix& a, std::span<const double> b) {
    if (a.rows() != b.size()) throw DimensionError("affine score: bias length must match rows of A");
    ScoreNet net({a.cols(), a.rows()});
    net.layers_[0].weights = a;
    net.layers_[0].bias.assign(b.begin(), b.end());
    return net;
}

std::size_t ScoreNet::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += l.weights.size() + l.bias.size();
    return n;
}

Vector ScoreNet::forward(std::span<const double> x) const {
    Vector out(output_dim());
    forward(x, out);
    return out;
}

void ScoreNet::forward(std::span<const double> x, std::span<double> out) const {
    check_input(*this, x.size());
    if (out.size() != output_dim()) throw DimensionError("score net output buffer has the wrong length");
    const auto& k = simd::active();
    Vector cur(x.begin(), x.end()), next;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const Matrix& w = layers_[l].weights;
        next.resize(w.rows());
        k.gemv(w.data().data(), w.rows(), w.cols(), w.cols(), cur.data(), layers_[l].bias.data(), next.data());
        if (l + 1 < layers_.size())
            for (double& v : next) v = v > 0.0 ? v : 0.0;
        cur.swap(next);
    }
    std::copy(cur.begin(), cur.end(), out.begin());
}

ScoreNet::Jacobian ScoreNet::input_jacobian(std::span<const double> x) const {
    check_input(*this, x.size());
    const auto& k = simd::active();
    ForwardCache c;
    run_forward(*this, x, c);
    const std::size_t d = input_dim();
    Matrix tan = Matrix::identity(d);  // row j = tangent of e_j
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const Matrix& w = layers_[l].weights;
        Matrix next(d, w.rows());
        for (std::size_t r = 0; r < d; ++r) {
            double* out = next.row(r).data();
            k.gemv(w.data().data(), w.rows(), w.cols(), w.cols(), tan.row(r).data(), nullptr, out);
            if (l + 1 < layers_.size())
                for (std::size_t i = 0; i < w.rows(); ++i)
                    if (!(c.pre[l][i] > 0.0)) out[i] = 0.0;
        }
        tan = std::move(next);
    }
    Jacobian j{tan.transpose(), 0.0};
    for (std::size_t i = 0; i < std::min(j.jacobian.rows(), j.jacobian.cols()); ++i) j.trace += j.jacobian(i, i);
    return j;
}

bool ScoreNet::all_finite() const {
    for (const auto& l : layers_) {
        if (!l.weights.all_finite()) return false;
        for (double b : l.bias)
            if (!std::isfinite(b)) return false;
    }
    return true;
}

Vector ScoreNet::flatten() const {
    Vector flat;
    flat.reserve(parameter_count());
    for (const auto& l : layers_) {
        flat.insert(flat.end(), l.weights.data().begin(), l.weights.data().end());
        flat.insert(flat.end(), l.bias.begin(), l.bias.end());
    }
    return flat;
}

void ScoreNet::assign(std::span<const double> flat) {
    if (flat.size() != parameter_count()) throw DimensionError("flat parameter vector has the wrong length");
    std::size_t pos = 0;
    for (auto& l : layers_) {
        for (double& w : l.weights.data()) w = flat[pos++];
        for (double& b : l.bias) b = flat[pos++];
    }
}

bool operator==(const ScoreNet& a, const ScoreNet& b) {
    if (a.sizes_ != b.sizes_) return false;
    for (std::size_t l = 0; l < a.layers_.size(); ++l)
        if (!(a.layers_[l].weights == b.layers_[l].weights) || a.layers_[l].bias != b.layers_[l].bias) return false;
    return true;
}

Vector LossGradient::flatten() const {
    Vector flat;
    for (const auto& l : gradients) {
        flat.insert(flat.end(), l.weights.data().begin(), l.weights.data().end());
        flat.insert(flat.end(), l.bias.begin(), l.bias.end());
    }
    return flat;
}

SliceSet draw_slices(std::size_t batch_rows, std::size_t dim, std::size_t per_sample, SliceDistribution dist,
                     RngStream& rng) {
    if (per_sample == 0) throw InvalidArgument("sliced score matching needs at least one slice");
    SliceSet s{per_sample, Matrix(batch_rows * per_sample, dim)};
    for (double& v : s.directions.data()) v = dist == SliceDistribution::Gaussian ? rng.normal() : rng.rademacher();
    return s;
}

double sm_loss(const ScoreNet& net, const Matrix& batch) {
    check_batch(net, batch);
    const Matrix eye = Matrix::identity(batch.cols());
    double total = 0.0;
    for (std::size_t i = 0; i < batch.rows(); ++i) total += sample_objective(net, batch.row(i), eye, 1.0, nullptr, 0.0);
    return total / static_cast<double>(batch.rows());
}

double ssm_loss(const ScoreNet& net, const Matrix& batch, const SliceSet& slices) {
    check_batch(net, batch);
    check_slices(batch, slices);
    const double w = 1.0 / static_cast<double>(slices.per_sample);
    double total = 0.0;
    for (std::size_t i = 0; i < batch.rows(); ++i)
        total += sample_objective(net, batch.row(i), slice_block(slices, i, batch.cols()), w, nullptr, 0.0);
    return total / static_cast<double>(batch.rows());
}

LossGradient sm_gradients(const ScoreNet& net, const Matrix& batch) {
    check_batch(net, batch);
    const Matrix eye = Matrix::identity(batch.cols());
    LossGradient out{0.0, zero_like(net.layers())};
    const double scale = 1.0 / static_cast<double>(batch.rows());
    for (std::size_t i = 0; i < batch.rows(); ++i)
        out.loss += sample_objective(net, batch.row(i), eye, 1.0, &out.gradients, scale);
    out.loss *= scale;
    return out;
}

LossGradient ssm_gradients(const ScoreNet& net, const Matrix& batch, const SliceSet& slices) {
    check_batch(net, batch);
    check_slices(batch, slices);
    LossGradient out{0.0, zero_like(net.layers())};
    const double w = 1.0 / static_cast<double>(slices.per_sample);
    const double scale = 1.0 / static_cast<double>(batch.rows());
    for (std::size_t i = 0; i < batch.rows(); ++i)
        out.loss += sample_objective(net, batch.row(i), slice_block(slices, i, batch.cols()), w, &out.gradients, scale);
    out.loss *= scale;
    return out;
}

}  // namespace scorelab
