#include "scorelab/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "scorelab/errors.hpp"

namespace scorelab {

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted) {
    if (truth.size() != predicted.size()) throw DimensionError("confusion: label vectors differ in length");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool pos = predicted[i] == 1;
        if (truth[i] == 1) (pos ? cm.tp : cm.fn)++;
        else (pos ? cm.fp : cm.tn)++;
    }
    return cm;
}

Metrics metrics(const ConfusionMatrix& cm) {
    Metrics m;
    const auto ratio = [&](double num, double den) {
        if (den == 0.0) {
            m.degenerate = true;
            return 0.0;
        }
        return num / den;
    };
    const double tp = static_cast<double>(cm.tp);
    m.recall = ratio(tp, tp + static_cast<double>(cm.fn));
    m.precision = ratio(tp, tp + static_cast<double>(cm.fp));
    m.f1 = ratio(2.0 * tp, 2.0 * tp + static_cast<double>(cm.fp + cm.fn));
    m.accuracy = ratio(static_cast<double>(cm.tp + cm.tn), static_cast<double>(cm.total()));
    m.mistakes = cm.fp + cm.fn;
    return m;
}

double jsd(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw DimensionError("jsd: distributions live on different grids");
    double sp = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] >= 0.0) || !(q[i] >= 0.0)) throw InvalidArgument("jsd: weights must be non-negative");
        sp += p[i];
        sq += q[i];
    }
    if (!(sp > 0.0) || !(sq > 0.0)) throw InvalidArgument("jsd: a distribution has zero mass");
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double a = p[i] / sp, b = q[i] / sq, m = 0.5 * (a + b);
        if (a > 0.0) d += 0.5 * a * std::log(a / m);
        if (b > 0.0) d += 0.5 * b * std::log(b / m);
    }
    return std::max(0.0, d);
}

}  // namespace scorelab
