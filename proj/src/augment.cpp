#include "scorelab/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scorelab/errors.hpp"
#include "scorelab/simd.hpp"

namespace scorelab {

namespace {

void check_minority(const Matrix& minority, std::size_t k) {
    if (minority.rows() < 2) throw InvalidArgument("insufficient minority rows: need at least 2");
    if (k == 0 || k > minority.rows() - 1)
        throw InvalidArgument("k must lie in [1, n - 1] for " + std::to_string(minority.rows()) + " minority rows");
}

Vector interpolate(const Matrix& pts, std::size_t i, std::size_t j, double u) {
    const auto a = pts.row(i), b = pts.row(j);
    Vector out(a.size());
    for (std::size_t c = 0; c < a.size(); ++c) out[c] = a[c] + u * (b[c] - a[c]);
    return out;
}

}  // namespace

std::vector<std::vector<std::size_t>> nearest_neighbours(const Matrix& points, std::size_t k) {
    const std::size_t n = points.rows();
    if (k > n - (n > 0 ? 1 : 0)) throw InvalidArgument("k exceeds the number of other rows");
    const auto& kern = simd::active();
    std::vector<std::vector<std::size_t>> out(n);
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t i = 0; i < n; ++i) {
        dist.clear();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) dist.emplace_back(kern.squared_distance(points.row(i).data(), points.row(j).data(), points.cols()), j);
        std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
        out[i].reserve(k);
        for (std::size_t m = 0; m < k; ++m) out[i].push_back(dist[m].second);
    }
    return out;
}

Matrix smote(const Matrix& minority, std::size_t k, std::size_t n_new, RngStream& rng) {
    check_minority(minority, k);
    Matrix out = Matrix(0, minority.cols());
    if (n_new == 0) return out;
    const auto nn = nearest_neighbours(minority, k);
    out.reserve_rows(n_new);
    for (std::size_t m = 0; m < n_new; ++m) {
        const std::size_t i = rng.index(minority.rows());
        const std::size_t j = nn[i][rng.index(k)];
        out.append_row(interpolate(minority, i, j, rng.uniform()));
    }
    return out;
}

Vector adasyn_difficulty(const Matrix& minority, const Matrix& majority, std::size_t k) {
    if (majority.rows() == 0) throw InvalidArgument("adasyn needs majority rows");
    if (majority.cols() != minority.cols()) throw DimensionError("class feature widths differ");
    const std::size_t n_min = minority.rows();
    const std::size_t total = n_min + majority.rows();
    if (k == 0 || k > total - 1) throw InvalidArgument("k must lie in [1, n - 1]");
    const auto& kern = simd::active();
    const std::size_t d = minority.cols();
    Vector diff(n_min);
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t i = 0; i < n_min; ++i) {
        dist.clear();
        const double* xi = minority.row(i).data();
        for (std::size_t j = 0; j < n_min; ++j)
            if (j != i) dist.emplace_back(kern.squared_distance(xi, minority.row(j).data(), d), j);
        for (std::size_t j = 0; j < majority.rows(); ++j)
            dist.emplace_back(kern.squared_distance(xi, majority.row(j).data(), d), n_min + j);
        std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
        std::size_t major = 0;
        for (std::size_t m = 0; m < k; ++m) major += dist[m].second >= n_min;
        diff[i] = static_cast<double>(major) / static_cast<double>(k);
    }
    return diff;
}

std::vector<std::size_t> allocate_largest_remainder(std::span<const double> weights, std::size_t n_new,
                                                    std::vector<std::string>* warnings) {
    const std::size_t n = weights.size();
    if (n == 0) throw InvalidArgument("allocation needs at least one weight");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("allocation weights must be finite and >= 0");
        total += w;
    }
    Vector share(n);
    if (total > 0.0) {
        for (std::size_t i = 0; i < n; ++i) share[i] = weights[i] / total * static_cast<double>(n_new);
    } else {
        if (warnings) warnings->push_back("all difficulties are zero; allocating uniformly");
        std::fill(share.begin(), share.end(), static_cast<double>(n_new) / static_cast<double>(n));
    }
    std::vector<std::size_t> counts(n);
    std::size_t given = 0;
    for (std::size_t i = 0; i < n; ++i) given += (counts[i] = static_cast<std::size_t>(std::floor(share[i])));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return share[a] - std::floor(share[a]) > share[b] - std::floor(share[b]);
    });
    for (std::size_t m = 0; given < n_new; ++m, ++given) ++counts[order[m % n]];
    return counts;
}

Matrix adasyn(const Matrix& minority, const Matrix& majority, std::size_t k, std::size_t n_new, RngStream& rng,
              std::vector<std::string>* warnings) {
    check_minority(minority, k);
    const Vector diff = adasyn_difficulty(minority, majority, k);
    const auto counts = allocate_largest_remainder(diff, n_new, warnings);
    const auto nn = nearest_neighbours(minority, k);
    Matrix out = Matrix(0, minority.cols());
    out.reserve_rows(n_new);
    for (std::size_t i = 0; i < minority.rows(); ++i)
        for (std::size_t m = 0; m < counts[i]; ++m) {
            const std::size_t j = nn[i][rng.index(k)];
            out.append_row(interpolate(minority, i, j, rng.uniform()));
        }
    return out;
}

Matrix score_oversample(const Matrix& minority, const TrainConfig& train_cfg, const LangevinConfig& langevin,
                        std::size_t n_new, std::vector<std::string>* log, ScoreNet* net_out) {
    if (minority.rows() < 2) throw InvalidArgument("insufficient minority rows: need at least 2");
    if (n_new == 0) return Matrix(0, minority.cols());
    TrainConfig tc = train_cfg;
    if (tc.layer_sizes.empty()) tc.layer_sizes = {minority.cols(), minority.cols()};
    const TrainResult fit = train(minority, tc);
    if (log)
        log->push_back("score net trained for " + std::to_string(fit.epochs_run) + " epochs, final loss " +
                       std::to_string(fit.loss_history.empty() ? 0.0 : fit.loss_history.back()));
    if (net_out) *net_out = fit.net;
    LangevinConfig lc = langevin;
    lc.target_count = n_new;
    LangevinResult res = generate(ScoreField::from_net(fit.net), minority, lc);
    if (log) log->insert(log->end(), res.log.begin(), res.log.end());
    return std::move(res.samples);
}

void AugmentPlan::validate() const {
    if (k == 0) throw InvalidArgument("augment k must be >= 1");
    if (minority_label != 0 && minority_label != 1) throw InvalidArgument("minority label must be 0 or 1");
    if (method == AugmentMethod::Score) langevin.validate();
}

AugmentResult augment(const LabeledDataset& train_set, const AugmentPlan& plan) {
    plan.validate();
    train_set.validate();
    AugmentResult res{train_set, {}};
    if (res.data.synthetic.size() != res.data.size()) res.data.synthetic.assign(res.data.size(), 0);
    if (plan.method == AugmentMethod::None || plan.n_new == 0) return res;
    const Matrix minority = train_set.class_rows(plan.minority_label);
    const Matrix majority = train_set.class_rows(1 - plan.minority_label);
    RngStream rng(plan.seed);
    Matrix added;
    switch (plan.method) {
        case AugmentMethod::Smote: added = smote(minority, plan.k, plan.n_new, rng); break;
        case AugmentMethod::Adasyn: added = adasyn(minority, majority, plan.k, plan.n_new, rng, &res.log); break;
        case AugmentMethod::Score: {
            LangevinConfig lc = plan.langevin;
            lc.seed = plan.seed;
            ScoreNet net;
            added = score_oversample(minority, plan.train, lc, plan.n_new, &res.log, &net);
            res.score_net = std::move(net);
            break;
        }
        case AugmentMethod::None: break;
    }
    res.data.append(added, plan.minority_label, true);
    res.log.push_back(std::string(method_name(plan.method)) + " added " + std::to_string(added.rows()) + " rows");
    return res;
}

const char* method_name(AugmentMethod m) {
    switch (m) {
        case AugmentMethod::None: return "none";
        case AugmentMethod::Smote: return "smote";
        case AugmentMethod::Adasyn: return "adasyn";
        case AugmentMethod::Score: return "score";
    }
    return "none";
}

AugmentMethod parse_augment_method(const std::string& name) {
    for (AugmentMethod m : {AugmentMethod::None, AugmentMethod::Smote, AugmentMethod::Adasyn, AugmentMethod::Score})
        if (name == method_name(m)) return m;
    throw InvalidArgument("unknown augmentation method '" + name + "'");
}

}  // namespace scorelab
