#include <algorithm>
#include <ostream>
#include <utility>

#include "scorelab/classify.hpp"
#include "scorelab/errors.hpp"
#include "scorelab/simd.hpp"

namespace scorelab {

namespace {

Prediction majority(std::size_t ones, std::size_t total) {
    if (total == 0) return {};
    const std::size_t zeros = total - ones;
    Prediction p;
    p.label = ones > zeros ? 1 : 0;
    p.confidence = static_cast<double>(std::max(ones, zeros)) / static_cast<double>(total);
    return p;
}

Prediction vote_one(const LabeledDataset& train, std::span<const double> x, const VoteConfig& cfg,
                    std::vector<std::pair<double, std::size_t>>& scratch) {
    const auto& k = simd::active();
    const std::size_t n = train.size();
    if (cfg.mode == VoteMode::FixedRadius) {
        const double r2 = cfg.radius * cfg.radius;
        std::size_t inside = 0, ones = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (k.squared_distance(x.data(), train.features.row(i).data(), x.size()) <= r2) {
                ++inside;
                ones += train.labels[i] == 1;
            }
        }
        return majority(ones, inside);
    }
    scratch.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        scratch[i] = {k.squared_distance(x.data(), train.features.row(i).data(), x.size()), i};
    const std::size_t kk = std::min(cfg.k, n);
    // Equal distances resolve by row index, so the neighbour set is deterministic.
    std::nth_element(scratch.begin(), scratch.begin() + (kk - 1), scratch.end());
    std::size_t ones = 0;
    for (std::size_t i = 0; i < kk; ++i) ones += train.labels[scratch[i].second] == 1;
    return majority(ones, kk);
}

void check(const LabeledDataset& train, std::size_t dim, const VoteConfig& cfg) {
    if (train.size() == 0) throw InvalidArgument("vote_classify needs a nonempty training set");
    if (dim != train.dim()) throw DimensionError("query dimension does not match the training set");
    if (cfg.mode == VoteMode::FixedK && cfg.k == 0) throw InvalidArgument("k must be >= 1");
    if (cfg.mode == VoteMode::FixedRadius && !(cfg.radius >= 0.0)) throw InvalidArgument("radius must be >= 0");
}

}  // namespace

Prediction vote_classify(const LabeledDataset& train, std::span<const double> x, const VoteConfig& cfg) {
    check(train, x.size(), cfg);
    std::vector<std::pair<double, std::size_t>> scratch;
    return vote_one(train, x, cfg, scratch);
}

std::vector<Prediction> vote_classify(const LabeledDataset& train, const Matrix& queries, const VoteConfig& cfg) {
    check(train, queries.cols(), cfg);
    std::vector<std::pair<double, std::size_t>> scratch;
    std::vector<Prediction> out(queries.rows());
    for (std::size_t q = 0; q < queries.rows(); ++q) out[q] = vote_one(train, queries.row(q), cfg, scratch);
    return out;
}

void write_predictions_csv(const Matrix& x, const std::vector<Prediction>& predictions, std::ostream& out) {
    if (x.rows() != predictions.size()) throw DimensionError("one prediction per row required");
    for (std::size_t j = 0; j < x.cols(); ++j) out << 'x' << j << ',';
    out << "label,confidence\n";
    const auto old = out.precision(17);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (double v : x.row(i)) out << v << ',';
        out << predictions[i].label << ',' << predictions[i].confidence << '\n';
    }
    out.precision(old);
}

}  // namespace scorelab
