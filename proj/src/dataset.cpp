#include "scorelab/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "scorelab/errors.hpp"

namespace scorelab {

Vector Standardization::apply(std::span<const double> x) const {
    if (x.size() != mean.size()) throw DimensionError("standardization: dimension mismatch");
    Vector z(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - mean[j]) / stddev[j];
    return z;
}

Vector Standardization::invert(std::span<const double> z) const {
    if (z.size() != mean.size()) throw DimensionError("standardization: dimension mismatch");
    Vector x(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) x[j] = z[j] * stddev[j] + mean[j];
    return x;
}

std::size_t LabeledDataset::count(int label) const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

void LabeledDataset::validate() const {
    if (features.rows() != labels.size()) throw InvalidArgument("dataset: feature rows and labels differ in length");
    if (!synthetic.empty() && synthetic.size() != labels.size())
        throw InvalidArgument("dataset: provenance flags and labels differ in length");
    if (!columns.empty() && columns.size() != features.cols())
        throw InvalidArgument("dataset: column names and feature width differ");
    for (int y : labels)
        if (y != 0 && y != 1) throw InvalidArgument("dataset: labels must be 0 or 1");
}

Matrix LabeledDataset::class_rows(int label) const {
    Matrix out(0, features.cols());
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) out.append_row(features.row(i));
    return out;
}

LabeledDataset LabeledDataset::subset(const std::vector<std::size_t>& indices) const {
    LabeledDataset out;
    out.features = Matrix(0, features.cols());
    out.features.reserve_rows(indices.size());
    out.columns = columns;
    out.scaling = scaling;
    for (std::size_t i : indices) {
        out.features.append_row(features.row(i));
        out.labels.push_back(labels[i]);
        out.synthetic.push_back(synthetic.empty() ? 0 : synthetic[i]);
    }
    return out;
}

void LabeledDataset::append(std::span<const double> x, int label, bool is_synthetic) {
    if (synthetic.size() < labels.size()) synthetic.resize(labels.size(), 0);
    features.append_row(x);
    labels.push_back(label);
    synthetic.push_back(is_synthetic ? 1 : 0);
}

void LabeledDataset::append(const Matrix& rows, int label, bool is_synthetic) {
    for (std::size_t i = 0; i < rows.rows(); ++i) append(rows.row(i), label, is_synthetic);
}

LabeledDataset LabeledDataset::from_classes(const Matrix& class0, const Matrix& class1) {
    LabeledDataset out;
    out.features = Matrix(0, std::max(class0.cols(), class1.cols()));
    out.append(class0, 0, false);
    out.append(class1, 1, false);
    return out;
}

ZScoreResult zscore(const LabeledDataset& data) {
    const std::size_t n = data.features.rows();
    const std::size_t d = data.features.cols();
    Standardization p;
    p.mean.assign(d, 0.0);
    p.stddev.assign(d, 1.0);
    p.degenerate.assign(d, false);
    for (std::size_t j = 0; j < d; ++j) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m += data.features(i, j);
        m = n ? m / static_cast<double>(n) : 0.0;
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = data.features(i, j) - m;
            v += t * t;
        }
        v = n ? v / static_cast<double>(n) : 0.0;
        const double s = std::sqrt(v);
        p.mean[j] = m;
        if (s > 0.0) {
            p.stddev[j] = s;
        } else {
            // Pass-through: no centring either, so constant columns keep their values.
            p.mean[j] = 0.0;
            p.degenerate[j] = true;
        }
    }
    return {apply_standardization(data, p), p};
}

LabeledDataset apply_standardization(const LabeledDataset& data, const Standardization& params) {
    LabeledDataset out = data;
    for (std::size_t i = 0; i < out.features.rows(); ++i) {
        const Vector z = params.apply(data.features.row(i));
        std::copy(z.begin(), z.end(), out.features.row(i).begin());
    }
    out.scaling = params;
    return out;
}

LabeledDataset invert_standardization(const LabeledDataset& data, const Standardization& params) {
    LabeledDataset out = data;
    for (std::size_t i = 0; i < out.features.rows(); ++i) {
        const Vector x = params.invert(data.features.row(i));
        std::copy(x.begin(), x.end(), out.features.row(i).begin());
    }
    out.scaling.reset();
    return out;
}

}  // namespace scorelab
