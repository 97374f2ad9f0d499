#pragma once

#include <cstdint>
#include <random>

#include "scorelab/matrix.hpp"

namespace scorelab {

// Seeded random stream. Child streams are derived from the parent's seed (not
// its state) through SplitMix64, so split(i) is stable no matter how many
// draws the parent has made, and distinct ids give unrelated sequences.
// Single-owner: do not share one stream across threads.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);

    RngStream split(std::uint64_t stream_id) const;
    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }
    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Unbiased integer in [0, n).
    std::size_t index(std::size_t n);
    double normal();
    // +1 or -1 with equal probability.
    double rademacher() { return (next_u64() >> 63) ? 1.0 : -1.0; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

Vector standard_normal(RngStream& rng, std::size_t n);

// Fisher-Yates shuffle driven by `rng` (std::shuffle's algorithm is unspecified).
template <class T>
void shuffle(std::vector<T>& v, RngStream& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = rng.index(i);
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace scorelab
