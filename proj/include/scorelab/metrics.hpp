#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace scorelab {

struct ConfusionMatrix {
    std::size_t tn = 0, fp = 0, fn = 0, tp = 0;
    std::size_t total() const { return tn + fp + fn + tp; }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// Predictions of -1 (abstain) are counted as negatives.
ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted);

struct Metrics {
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
    std::size_t mistakes = 0;
    // Set when a ratio had a zero denominator; the affected value is reported as 0.
    bool degenerate = false;
};

Metrics metrics(const ConfusionMatrix& cm);

// Jensen-Shannon divergence (natural log) between two non-negative weight
// vectors on the same grid. Both are renormalized first.
double jsd(std::span<const double> p, std::span<const double> q);

}  // namespace scorelab
