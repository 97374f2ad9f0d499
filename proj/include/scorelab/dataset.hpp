#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scorelab/matrix.hpp"

namespace scorelab {

// Per-column z-score parameters. Columns whose standard deviation is zero are
// flagged degenerate and pass through unscaled (std recorded as 1).
// Variances use the population (1/n) divisor.
struct Standardization {
    Vector mean;
    Vector stddev;
    std::vector<bool> degenerate;

    Vector apply(std::span<const double> x) const;
    Vector invert(std::span<const double> z) const;
};

struct LabeledDataset {
    Matrix features;                 // n x d
    std::vector<int> labels;         // n entries in {0, 1}
    std::vector<std::string> columns;  // d names (may be empty)
    std::vector<std::uint8_t> synthetic;  // n provenance flags; 1 = generated row
    std::optional<Standardization> scaling;
    std::vector<std::size_t> flipped;  // row indices whose labels were flipped

    std::size_t size() const { return labels.size(); }
    std::size_t dim() const { return features.cols(); }
    std::size_t count(int label) const;

    // Checks field consistency and label range; throws InvalidArgument.
    void validate() const;

    Matrix class_rows(int label) const;
    LabeledDataset subset(const std::vector<std::size_t>& indices) const;
    void append(std::span<const double> x, int label, bool is_synthetic = false);
    void append(const Matrix& rows, int label, bool is_synthetic);

    static LabeledDataset from_classes(const Matrix& class0, const Matrix& class1);
};

// Standardizes every column; the returned dataset carries the parameters.
struct ZScoreResult {
    LabeledDataset scaled;
    Standardization params;
};
ZScoreResult zscore(const LabeledDataset& data);

// Applies existing parameters (e.g. train-split statistics to a test split).
LabeledDataset apply_standardization(const LabeledDataset& data, const Standardization& params);
LabeledDataset invert_standardization(const LabeledDataset& data, const Standardization& params);

}  // namespace scorelab
