#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "scorelab/gaussian.hpp"
#include "scorelab/matrix.hpp"
#include "scorelab/rng.hpp"
#include "scorelab/score_net.hpp"

namespace scorelab {

// Any mapping x -> s(x) on R^d. Must be safe to call concurrently if the
// caller evaluates it from several threads.
struct ScoreField {
    std::size_t dim = 0;
    std::function<Vector(std::span<const double>)> eval;

    Vector operator()(std::span<const double> x) const { return eval(x); }

    static ScoreField from_net(const ScoreNet& net);  // keeps a copy of the net
    static ScoreField from_gaussian(const GaussianModel& model);
};

enum class Quadrature1d { Midpoint, Random, Taylor };

// log p(b) - log p(a) in one dimension. Midpoint: (b-a)/n * sum s(x_k) at
// equidistant midpoints. Random: same sum at uniform abscissae (needs rng).
// Taylor: s(a) (b - a), ignoring n.
double log_ratio_1d(const ScoreField& field, double a, double b, std::size_t n, Quadrature1d method,
                    RngStream* rng = nullptr);

// Straight path from a to b through n equally spaced points (n - 1 segments),
// trapezoid of endpoint scores dotted with each increment.
double line_integral(const ScoreField& field, std::span<const double> a, std::span<const double> b, std::size_t n);

// Sum of straight-line integrals through the given waypoints.
double path_integral(const ScoreField& field, const std::vector<Vector>& waypoints, std::size_t n_per_segment);

// Cartesian grid, one axis of coordinates per dimension. Nodes are ordered
// row-major: the last dimension varies fastest.
struct Grid {
    std::vector<Vector> axes;

    static Grid uniform(std::span<const double> lo, std::span<const double> hi, std::span<const std::size_t> counts);
    std::size_t dim() const { return axes.size(); }
    std::size_t size() const;
    Vector point(std::size_t flat) const;
    std::vector<std::size_t> unflatten(std::size_t flat) const;
    std::size_t flatten(const std::vector<std::size_t>& idx) const;
    // Product of axis spacings around the node (trapezoid cell weights).
    double cell_volume(std::size_t flat) const;
};

struct DensitySettings {
    // Points per segment between neighbouring nodes (and from the anchor to its nearest node).
    std::size_t points_per_segment = 2;
};

struct DensityField {
    Vector anchor;
    double anchor_density = 0.0;
    Grid grid;
    Matrix points;            // grid.size() x d
    Vector log_density;       // log p, unclamped
    Vector density;           // p, clamped into [DBL_MIN, DBL_MAX]
    std::vector<std::string> warnings;
    DensitySettings settings;

    // Trapezoid-weighted sum of densities over the grid.
    double mass() const;
};

// Walks the grid from the node nearest to the anchor. A node's parent is the
// neighbour one step closer to the anchor node in the highest dimension where
// they differ, so the walk sweeps the anchor's row along dimension 0 first
// and then fans out dimension by dimension. Each step adds a line integral.
DensityField construct_density(const ScoreField& field, std::span<const double> anchor, double anchor_density,
                               const Grid& grid, const DensitySettings& settings = {});

// Densities at arbitrary points, each integrated along its own straight path from the anchor.
Vector density_at(const ScoreField& field, std::span<const double> anchor, double anchor_density,
                  const Matrix& points, std::size_t n_points, std::vector<std::string>* warnings = nullptr);

// Mean of field(x_i) over n points drawn uniformly from the radius-sigma ball around x.
Vector smooth_scores(const ScoreField& field, std::span<const double> x, double sigma, std::size_t n, RngStream& rng);
// Wraps a field so every evaluation is smoothed (draws come from a per-call stream seeded by `seed`).
ScoreField smoothed(ScoreField field, double sigma, std::size_t n, std::uint64_t seed);

enum class InitialDensityMethod { GaussianCentral, NeighbourCount };

struct InitialDensity {
    Vector x0;
    double p0 = 0.0;
};

InitialDensity initial_density(const Matrix& samples, InitialDensityMethod method, double sigma = 0.0);

// Volume of the d-dimensional ball of the given radius.
double ball_volume(std::size_t d, double radius);

// Writes "x0,...,x{d-1},density" rows.
void write_density_csv(const DensityField& field, std::ostream& out);

}  // namespace scorelab
