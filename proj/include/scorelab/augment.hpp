#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scorelab/dataset.hpp"
#include "scorelab/langevin.hpp"
#include "scorelab/matrix.hpp"
#include "scorelab/rng.hpp"
#include "scorelab/score_net.hpp"

namespace scorelab {

// Neighbour searches below are plain Euclidean on whatever coordinates they
// are handed; callers standardize first.

// Indices of the k nearest rows of `points` to each row (itself excluded),
// nearest first, ties by index.
std::vector<std::vector<std::size_t>> nearest_neighbours(const Matrix& points, std::size_t k);

// Each output is x_i + u (x_nn - x_i): i uniform over the minority rows, x_nn
// uniform over its k nearest minority neighbours, u ~ U(0, 1).
// Throws InvalidArgument when fewer than 2 minority rows or k > n - 1.
Matrix smote(const Matrix& minority, std::size_t k, std::size_t n_new, RngStream& rng);

// Fraction of majority rows among each minority row's k nearest neighbours in
// the union of both classes.
Vector adasyn_difficulty(const Matrix& minority, const Matrix& majority, std::size_t k);

// Largest-remainder split of n_new in proportion to the weights; the counts
// sum to n_new exactly. Equal remainders go to the lower index. All-zero
// weights fall back to equal weights (warning appended if given).
std::vector<std::size_t> allocate_largest_remainder(std::span<const double> weights, std::size_t n_new,
                                                    std::vector<std::string>* warnings = nullptr);

// SMOTE interpolation with the per-row counts from adasyn_difficulty.
Matrix adasyn(const Matrix& minority, const Matrix& majority, std::size_t k, std::size_t n_new, RngStream& rng,
              std::vector<std::string>* warnings = nullptr);

// Trains a score net on the minority rows alone, then draws n_new Langevin
// samples seeded from them (target_count is overridden by n_new). An empty
// train.layer_sizes means the affine net {d, d}.
Matrix score_oversample(const Matrix& minority, const TrainConfig& train, const LangevinConfig& langevin,
                        std::size_t n_new, std::vector<std::string>* log = nullptr, ScoreNet* net_out = nullptr);

enum class AugmentMethod { None, Smote, Adasyn, Score };

struct AugmentPlan {
    AugmentMethod method = AugmentMethod::None;
    std::size_t k = 5;
    std::size_t n_new = 0;
    std::uint64_t seed = 0;
    TrainConfig train;        // Score only
    LangevinConfig langevin;  // Score only
    int minority_label = 1;

    void validate() const;
};

struct AugmentResult {
    LabeledDataset data;  // input rows first, synthetic rows appended and flagged
    std::vector<std::string> log;
    std::optional<ScoreNet> score_net;  // Score only
};

AugmentResult augment(const LabeledDataset& train, const AugmentPlan& plan);

const char* method_name(AugmentMethod m);
AugmentMethod parse_augment_method(const std::string& name);

}  // namespace scorelab
