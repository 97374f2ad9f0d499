#include "scorelab/langevin.hpp"

#include <algorithm>
#include <cmath>

#include "scorelab/errors.hpp"

namespace scorelab {

std::size_t LangevinConfig::kept_per_chain() const {
    const double drop = std::floor(static_cast<double>(length) * discard_rate + 1e-9);
    return length - static_cast<std::size_t>(drop);
}

void LangevinConfig::validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) throw InvalidArgument("langevin: step size must be positive");
    if (length == 0) throw InvalidArgument("langevin: chain length must be at least 1");
    if (!(discard_rate >= 0.0 && discard_rate < 1.0)) throw InvalidArgument("langevin: discard rate must be in [0, 1)");
    if (kept_per_chain() == 0) throw InvalidArgument("langevin: discard rate leaves no samples per chain");
}

Matrix chain(const ScoreField& field, std::span<const double> x0, const LangevinConfig& cfg, RngStream& rng) {
    cfg.validate();
    const std::size_t d = x0.size();
    if (d != field.dim) throw DimensionError("langevin: start point dimension does not match the field");
    const std::size_t kept = cfg.kept_per_chain();
    const std::size_t first_kept = cfg.length - kept;
    const double half = 0.5 * cfg.step, noise = std::sqrt(cfg.step);
    Matrix out(kept, d);
    Vector x(x0.begin(), x0.end());
    for (std::size_t i = 0; i < cfg.length; ++i) {
        const Vector s = field(x);
        for (std::size_t j = 0; j < d; ++j) x[j] += half * s[j] + noise * rng.normal();
        for (double v : x)
            if (!std::isfinite(v)) throw DivergenceError("langevin chain diverged at step " + std::to_string(i), i);
        if (i >= first_kept) std::copy(x.begin(), x.end(), out.row(i - first_kept).begin());
    }
    return out;
}

double score_norm_floor(std::span<const double> norms) {
    if (norms.empty()) return kMinScoreNormFloor;
    const std::size_t n = norms.size();
    Vector sorted(norms.begin(), norms.end());
    std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
    double median = sorted[n / 2];
    if (n % 2 == 0) median = 0.5 * (median + *std::max_element(sorted.begin(), sorted.begin() + n / 2));
    return median > 0.0 ? 1e-6 * median : kMinScoreNormFloor;
}

Vector start_weights(const ScoreField& field, const Matrix& seeds) {
    if (seeds.rows() == 0) throw InvalidArgument("start_weights needs at least one seed");
    const std::size_t n = seeds.rows();
    Vector norms(n);
    for (std::size_t i = 0; i < n; ++i) norms[i] = norm(field(seeds.row(i)));
    const double eta = score_norm_floor(norms);
    Vector w(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += (w[i] = 1.0 / (norms[i] + eta));
    for (double& v : w) v /= total;
    return w;
}

namespace {

std::size_t draw_index(const Vector& cumulative, RngStream& rng) {
    const double u = rng.uniform() * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

}  // namespace

LangevinResult generate(const ScoreField& field, const Matrix& seeds, const LangevinConfig& cfg) {
    cfg.validate();
    if (seeds.rows() == 0) throw InvalidArgument("langevin: seeds must be non-empty");
    if (seeds.cols() != field.dim) throw DimensionError("langevin: seed dimension does not match the field");
    const std::size_t d = field.dim;
    const std::size_t kept = cfg.kept_per_chain();
    const std::size_t target = cfg.target_count ? *cfg.target_count : cfg.n_chains * kept;

    LangevinResult res;
    res.samples = Matrix(0, d);
    if (target == 0) return res;

    Vector cumulative;
    if (cfg.start_policy == StartPolicy::ScoreWeighted) {
        cumulative = start_weights(field, seeds);
        for (std::size_t i = 1; i < cumulative.size(); ++i) cumulative[i] += cumulative[i - 1];
    } else {
        cumulative.resize(seeds.rows());
        for (std::size_t i = 0; i < cumulative.size(); ++i) cumulative[i] = static_cast<double>(i + 1);
    }

    const std::size_t planned = (target + kept - 1) / kept;
    const std::size_t max_attempts = 2 * planned;
    const RngStream root(cfg.seed);
    res.samples.reserve_rows(target);
    std::size_t have = 0;
    for (std::size_t c = 0; have < target && c < max_attempts; ++c) {
        RngStream rng = root.split(c);
        const std::size_t start = draw_index(cumulative, rng);
        ++res.chains_run;
        Matrix out;
        try {
            out = chain(field, seeds.row(start), cfg, rng);
        } catch (const DivergenceError& e) {
            res.diverged_chains.push_back(c);
            res.log.push_back("chain " + std::to_string(c) + " dropped: " + e.what());
            continue;
        }
        const std::size_t take = std::min(kept, target - have);
        for (std::size_t r = 0; r < take; ++r) {
            res.samples.append_row(out.row(r));
            res.chain_of.push_back(c);
        }
        have += take;
    }
    if (have == 0) throw DivergenceError("langevin: every chain diverged", res.chains_run);
    if (have < target)
        res.log.push_back("stopped after " + std::to_string(res.chains_run) + " chains with " + std::to_string(have) +
                          " of " + std::to_string(target) + " samples");
    return res;
}

}  // namespace scorelab
