#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scorelab/density.hpp"
#include "scorelab/matrix.hpp"
#include "scorelab/rng.hpp"

namespace scorelab {

enum class StartPolicy {
    ScoreWeighted,  // starts drawn with probability proportional to 1 / (|s(x)| + eta)
    Uniform,        // starts drawn uniformly from the seeds
};

struct LangevinConfig {
    double step = 0.01;         // epsilon
    std::size_t length = 1000;  // l, steps per chain
    double discard_rate = 0.2;  // gamma, leading fraction of each chain thrown away
    std::size_t n_chains = 1;   // used when target_count is unset
    std::optional<std::size_t> target_count;
    std::uint64_t seed = 0;
    StartPolicy start_policy = StartPolicy::ScoreWeighted;

    // l - floor(l * gamma). A 1e-9 guard keeps products such as 100 * 0.3 from
    // landing one below the intended integer.
    std::size_t kept_per_chain() const;
    void validate() const;
};

// Runs `cfg.length` unadjusted Langevin steps x <- x + (eps/2) s(x) + sqrt(eps) z
// from x0 and returns the last kept_per_chain() states (one per row).
// Throws DivergenceError with the step index if a state leaves the finite reals.
Matrix chain(const ScoreField& field, std::span<const double> x0, const LangevinConfig& cfg, RngStream& rng);

// Floor eta for inverse-score-norm heuristics: 1e-6 times the median of the
// given norms, or kMinScoreNormFloor when that median is zero.
inline constexpr double kMinScoreNormFloor = 1e-12;
double score_norm_floor(std::span<const double> norms);

// Normalized weights proportional to 1 / (|s(x_i)| + eta), eta = score_norm_floor
// of the seed score norms.
Vector start_weights(const ScoreField& field, const Matrix& seeds);

struct LangevinResult {
    Matrix samples;                         // ordered by chain index, then step
    std::vector<std::size_t> chain_of;      // source chain of each row
    std::size_t chains_run = 0;
    std::vector<std::size_t> diverged_chains;
    std::vector<std::string> log;
};

// Chains run in index order, chain c owning the stream split(c) of the root
// seed. The target is target_count kept samples, or n_chains full chains when
// target_count is unset; the final chain is truncated to hit it exactly. A
// diverged chain is dropped and logged and a replacement started, up to twice
// the planned chain count. Throws DivergenceError only if every chain diverged.
LangevinResult generate(const ScoreField& field, const Matrix& seeds, const LangevinConfig& cfg);

}  // namespace scorelab
