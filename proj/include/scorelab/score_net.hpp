#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "scorelab/matrix.hpp"
#include "scorelab/rng.hpp"

namespace scorelab {

struct DenseLayer {
    Matrix weights;  // out x in
    Vector bias;     // out
};

// Feed-forward network s(x): R^d -> R^d used as a score model. Hidden layers
// use ReLU (subgradient 0 at 0), the output layer is linear. A net with
// layer sizes {d, d} is the affine score s(x) = A x + b.
//
// A constructed net is immutable in use; forward and input_jacobian are
// const and safe to call concurrently.
class ScoreNet {
public:
    ScoreNet() = default;
    // Zero-initialised parameters.
    explicit ScoreNet(std::vector<std::size_t> layer_sizes);
    // Glorot-uniform weights in +/- sqrt(6 / (fan_in + fan_out)), zero biases.
    static ScoreNet glorot(std::vector<std::size_t> layer_sizes, RngStream& rng);
    // Single affine layer s(x) = a x + b.
    static ScoreNet affine(const Matrix& a, std::span<const double> b);

    const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
    std::size_t input_dim() const { return sizes_.empty() ? 0 : sizes_.front(); }
    std::size_t output_dim() const { return sizes_.empty() ? 0 : sizes_.back(); }
    std::size_t parameter_count() const;

    std::vector<DenseLayer>& layers() { return layers_; }
    const std::vector<DenseLayer>& layers() const { return layers_; }

    Vector forward(std::span<const double> x) const;
    void forward(std::span<const double> x, std::span<double> out) const;

    struct Jacobian {
        Matrix jacobian;  // J(i, j) = d s_i / d x_j
        double trace = 0.0;
    };
    // Exact Jacobian by one forward-mode tangent per input coordinate.
    Jacobian input_jacobian(std::span<const double> x) const;

    bool all_finite() const;

    // Flat views over all parameters (layer by layer: weights row-major, then bias).
    Vector flatten() const;
    void assign(std::span<const double> flat);

    friend bool operator==(const ScoreNet&, const ScoreNet&);

private:
    std::vector<std::size_t> sizes_;
    std::vector<DenseLayer> layers_;
};

enum class Objective { ScoreMatching, SlicedScoreMatching };
enum class SliceDistribution { Gaussian, Rademacher };

// Projection vectors for sliced score matching: `per_sample` rows per batch row.
struct SliceSet {
    std::size_t per_sample = 0;
    Matrix directions;  // (batch_rows * per_sample) x d
};
SliceSet draw_slices(std::size_t batch_rows, std::size_t dim, std::size_t per_sample, SliceDistribution dist,
                     RngStream& rng);

// Mean over the batch of 1/2 |s(x)|^2 + tr(grad_x s(x)). The additive
// constant of the explicit Fisher divergence is dropped, so values can be negative.
double sm_loss(const ScoreNet& net, const Matrix& batch);

// Mean over batch and slices of v^T (grad_x s(x)) v + 1/2 |s(x)|^2.
double ssm_loss(const ScoreNet& net, const Matrix& batch, const SliceSet& slices);

struct LossGradient {
    double loss = 0.0;
    std::vector<DenseLayer> gradients;  // same shapes as the net's layers
    Vector flatten() const;
};

LossGradient sm_gradients(const ScoreNet& net, const Matrix& batch);
LossGradient ssm_gradients(const ScoreNet& net, const Matrix& batch, const SliceSet& slices);

struct TrainConfig {
    std::vector<std::size_t> layer_sizes;
    double learning_rate = 0.01;
    std::size_t epochs = 2000;
    std::size_t batch_size = 0;  // 0 = full batch
    Objective objective = Objective::ScoreMatching;
    std::size_t n_slices = 1;
    SliceDistribution slice_distribution = SliceDistribution::Gaussian;
    std::uint64_t seed = 0;
    // Early stop once the trailing-window mean loss stops improving by more
    // than `plateau_tolerance` for `plateau_patience` epochs. 0 disables.
    std::size_t plateau_patience = 0;
    double plateau_tolerance = 1e-7;

    void validate() const;
};

struct TrainResult {
    ScoreNet net;
    std::vector<double> loss_history;  // mean minibatch loss per epoch
    std::size_t epochs_run = 0;
    bool stopped_on_plateau = false;
};

// Plain minibatch SGD (no momentum). Deterministic for a fixed seed and ISA.
// Throws DivergenceError carrying the epoch on a non-finite loss.
TrainResult train(const Matrix& data, const TrainConfig& cfg);
// Continue from an existing net (same protocol, cfg.layer_sizes ignored).
TrainResult train(const Matrix& data, const TrainConfig& cfg, ScoreNet initial);

// Versioned little-endian binary record; layout documented in docs/formats.md.
inline constexpr std::uint32_t kModelFormatVersion = 1;
std::string serialize(const ScoreNet& net);
ScoreNet deserialize(std::string_view bytes);
void save_model(const ScoreNet& net, const std::string& path);
ScoreNet load_model(const std::string& path);

}  // namespace scorelab
