#include "scorelab/density.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <ostream>

#include "scorelab/errors.hpp"

namespace scorelab {

ScoreField ScoreField::from_net(const ScoreNet& net) {
    if (net.input_dim() != net.output_dim()) throw DimensionError("score field needs a net with input dim = output dim");
    return {net.input_dim(), [net](std::span<const double> x) { return net.forward(x); }};
}

ScoreField ScoreField::from_gaussian(const GaussianModel& model) {
    return {model.dim(), [model](std::span<const double> x) { return model.score(x); }};
}

double log_ratio_1d(const ScoreField& field, double a, double b, std::size_t n, Quadrature1d method, RngStream* rng) {
    if (field.dim != 1) throw DimensionError("log_ratio_1d needs a one-dimensional field");
    if (method == Quadrature1d::Taylor) return field(Vector{a})[0] * (b - a);
    if (n == 0) throw InvalidArgument("log_ratio_1d needs n >= 1");
    if (method == Quadrature1d::Random && rng == nullptr) throw InvalidArgument("random abscissae need an rng");
    const double dx = b - a;
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double u = method == Quadrature1d::Midpoint ? (static_cast<double>(k) + 0.5) / static_cast<double>(n)
                                                          : rng->uniform();
        sum += field(Vector{a + u * dx})[0];
    }
    return dx * sum / static_cast<double>(n);
}

namespace {

void check_point(const ScoreField& field, std::span<const double> x) {
    if (x.size() != field.dim) throw DimensionError("point dimension does not match the score field");
}

// Trapezoid line integral when the endpoint scores are already known.
double segment_integral(const ScoreField& field, std::span<const double> a, std::span<const double> b,
                        const Vector& sa, const Vector& sb, std::size_t n) {
    const std::size_t d = a.size();
    if (n < 2) throw InvalidArgument("line integral needs at least two points");
    const double steps = static_cast<double>(n - 1);
    Vector dx(d);
    for (std::size_t j = 0; j < d; ++j) dx[j] = (b[j] - a[j]) / steps;
    double sum = 0.0;
    Vector prev = sa, x(d);
    for (std::size_t k = 1; k < n; ++k) {
        Vector cur;
        if (k + 1 == n) {
            cur = sb;
        } else {
            const double t = static_cast<double>(k) / steps;
            for (std::size_t j = 0; j < d; ++j) x[j] = a[j] + t * (b[j] - a[j]);
            cur = field(x);
        }
        for (std::size_t j = 0; j < d; ++j) sum += 0.5 * (prev[j] + cur[j]) * dx[j];
        prev.swap(cur);
    }
    return sum;
}

double clamp_density(double p0, double log_ratio, std::size_t& overflow, std::size_t& underflow) {
    const double p = p0 * std::exp(log_ratio);
    if (!(p <= DBL_MAX)) {
        ++overflow;
        return DBL_MAX;
    }
    if (p < DBL_MIN) {
        ++underflow;
        return DBL_MIN;
    }
    return p;
}

void push_clamp_warnings(std::vector<std::string>& w, std::size_t overflow, std::size_t underflow) {
    if (overflow) w.push_back(std::to_string(overflow) + " densities overflowed and were clamped to DBL_MAX");
    if (underflow) w.push_back(std::to_string(underflow) + " densities underflowed and were clamped to DBL_MIN");
}

}  // namespace

double line_integral(const ScoreField& field, std::span<const double> a, std::span<const double> b, std::size_t n) {
    check_point(field, a);
    check_point(field, b);
    if (std::equal(a.begin(), a.end(), b.begin())) return 0.0;
    return segment_integral(field, a, b, field(a), field(b), n);
}

double path_integral(const ScoreField& field, const std::vector<Vector>& waypoints, std::size_t n_per_segment) {
    double sum = 0.0;
    for (std::size_t i = 1; i < waypoints.size(); ++i) sum += line_integral(field, waypoints[i - 1], waypoints[i], n_per_segment);
    return sum;
}

Grid Grid::uniform(std::span<const double> lo, std::span<const double> hi, std::span<const std::size_t> counts) {
    if (lo.size() != hi.size() || lo.size() != counts.size()) throw DimensionError("grid bounds and counts disagree");
    Grid g;
    for (std::size_t j = 0; j < lo.size(); ++j) {
        if (counts[j] == 0) throw InvalidArgument("grid axis needs at least one point");
        Vector axis(counts[j]);
        for (std::size_t i = 0; i < counts[j]; ++i)
            axis[i] = counts[j] == 1 ? lo[j] : lo[j] + (hi[j] - lo[j]) * static_cast<double>(i) / static_cast<double>(counts[j] - 1);
        g.axes.push_back(std::move(axis));
    }
    return g;
}

std::size_t Grid::size() const {
    if (axes.empty()) return 0;
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.size();
    return n;
}

std::vector<std::size_t> Grid::unflatten(std::size_t flat) const {
    std::vector<std::size_t> idx(dim());
    for (std::size_t j = dim(); j-- > 0;) {
        idx[j] = flat % axes[j].size();
        flat /= axes[j].size();
    }
    return idx;
}

std::size_t Grid::flatten(const std::vector<std::size_t>& idx) const {
    std::size_t flat = 0;
    for (std::size_t j = 0; j < dim(); ++j) flat = flat * axes[j].size() + idx[j];
    return flat;
}

Vector Grid::point(std::size_t flat) const {
    const auto idx = unflatten(flat);
    Vector p(dim());
    for (std::size_t j = 0; j < dim(); ++j) p[j] = axes[j][idx[j]];
    return p;
}

double Grid::cell_volume(std::size_t flat) const {
    const auto idx = unflatten(flat);
    double v = 1.0;
    for (std::size_t j = 0; j < dim(); ++j) {
        const Vector& a = axes[j];
        if (a.size() == 1) continue;
        const std::size_t i = idx[j];
        const double left = i > 0 ? a[i] - a[i - 1] : 0.0;
        const double right = i + 1 < a.size() ? a[i + 1] - a[i] : 0.0;
        v *= 0.5 * (left + right);
    }
    return v;
}

double DensityField::mass() const {
    double m = 0.0;
    for (std::size_t i = 0; i < density.size(); ++i) m += density[i] * grid.cell_volume(i);
    return m;
}

DensityField construct_density(const ScoreField& field, std::span<const double> anchor, double anchor_density,
                               const Grid& grid, const DensitySettings& settings) {
    check_point(field, anchor);
    if (grid.dim() != field.dim) throw DimensionError("grid dimension does not match the score field");
    if (!(anchor_density > 0.0) || !std::isfinite(anchor_density))
        throw InvalidArgument("anchor density must be positive and finite");
    if (settings.points_per_segment < 2) throw InvalidArgument("need at least two points per segment");
    const std::size_t d = grid.dim(), n = grid.size();

    DensityField out;
    out.anchor.assign(anchor.begin(), anchor.end());
    out.anchor_density = anchor_density;
    out.grid = grid;
    out.settings = settings;
    out.points = Matrix(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        const Vector p = grid.point(i);
        std::copy(p.begin(), p.end(), out.points.row(i).begin());
    }

    // Node nearest to the anchor, per axis.
    std::vector<std::size_t> a_idx(d);
    for (std::size_t j = 0; j < d; ++j) {
        const Vector& ax = grid.axes[j];
        std::size_t best = 0;
        for (std::size_t i = 1; i < ax.size(); ++i)
            if (std::abs(ax[i] - anchor[j]) < std::abs(ax[best] - anchor[j])) best = i;
        a_idx[j] = best;
    }
    const std::size_t a_flat = grid.flatten(a_idx);

    std::vector<Vector> scores(n);
    for (std::size_t i = 0; i < n; ++i) scores[i] = field(out.points.row(i));

    // Nodes grouped by index-space distance from the anchor node; every parent is one level closer.
    std::vector<std::size_t> level(n);
    std::size_t max_level = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = grid.unflatten(i);
        std::size_t l = 0;
        for (std::size_t j = 0; j < d; ++j) l += idx[j] > a_idx[j] ? idx[j] - a_idx[j] : a_idx[j] - idx[j];
        level[i] = l;
        max_level = std::max(max_level, l);
    }
    std::vector<std::vector<std::size_t>> by_level(max_level + 1);
    for (std::size_t i = 0; i < n; ++i) by_level[level[i]].push_back(i);

    Vector rel(n, 0.0);  // log p(node) - log p0
    rel[a_flat] = segment_integral(field, anchor, out.points.row(a_flat), field(anchor), scores[a_flat],
                                   settings.points_per_segment);
    if (std::equal(anchor.begin(), anchor.end(), out.points.row(a_flat).begin())) rel[a_flat] = 0.0;

    for (std::size_t l = 1; l <= max_level; ++l)
        for (std::size_t i : by_level[l]) {
            auto idx = grid.unflatten(i);
            std::size_t j = d;
            while (j-- > 0 && idx[j] == a_idx[j]) {
            }
            idx[j] = idx[j] > a_idx[j] ? idx[j] - 1 : idx[j] + 1;
            const std::size_t parent = grid.flatten(idx);
            rel[i] = rel[parent] + segment_integral(field, out.points.row(parent), out.points.row(i), scores[parent],
                                                    scores[i], settings.points_per_segment);
        }

    out.log_density.resize(n);
    out.density.resize(n);
    std::size_t over = 0, under = 0;
    const double log_p0 = std::log(anchor_density);
    for (std::size_t i = 0; i < n; ++i) {
        out.log_density[i] = log_p0 + rel[i];
        out.density[i] = clamp_density(anchor_density, rel[i], over, under);
    }
    push_clamp_warnings(out.warnings, over, under);
    return out;
}

Vector density_at(const ScoreField& field, std::span<const double> anchor, double anchor_density, const Matrix& points,
                  std::size_t n_points, std::vector<std::string>* warnings) {
    if (!(anchor_density > 0.0)) throw InvalidArgument("anchor density must be positive");
    Vector out(points.rows());
    std::size_t over = 0, under = 0;
    for (std::size_t i = 0; i < points.rows(); ++i)
        out[i] = clamp_density(anchor_density, line_integral(field, anchor, points.row(i), n_points), over, under);
    if (warnings) push_clamp_warnings(*warnings, over, under);
    return out;
}

Vector smooth_scores(const ScoreField& field, std::span<const double> x, double sigma, std::size_t n, RngStream& rng) {
    check_point(field, x);
    if (!(sigma >= 0.0)) throw InvalidArgument("smoothing radius must be non-negative");
    if (n == 0) throw InvalidArgument("smoothing needs n >= 1");
    if (sigma == 0.0) return field(x);
    const std::size_t d = x.size();
    Vector acc(d, 0.0), p(d);
    for (std::size_t k = 0; k < n; ++k) {
        // Uniform in the ball: Gaussian direction, radius sigma * u^{1/d}.
        Vector dir = standard_normal(rng, d);
        double len = norm(dir);
        while (len == 0.0) {
            dir = standard_normal(rng, d);
            len = norm(dir);
        }
        const double r = sigma * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
        for (std::size_t j = 0; j < d; ++j) p[j] = x[j] + r * dir[j] / len;
        const Vector s = field(p);
        for (std::size_t j = 0; j < d; ++j) acc[j] += s[j];
    }
    for (double& v : acc) v /= static_cast<double>(n);
    return acc;
}

ScoreField smoothed(ScoreField field, double sigma, std::size_t n, std::uint64_t seed) {
    const std::size_t d = field.dim;
    return {d, [field = std::move(field), sigma, n, seed](std::span<const double> x) {
                RngStream rng(seed);
                return smooth_scores(field, x, sigma, n, rng);
            }};
}

double ball_volume(std::size_t d, double radius) {
    const double h = 0.5 * static_cast<double>(d);
    return std::exp(h * std::log(std::numbers::pi) - std::lgamma(h + 1.0)) * std::pow(radius, static_cast<double>(d));
}

InitialDensity initial_density(const Matrix& samples, InitialDensityMethod method, double sigma) {
    if (samples.rows() < 2) throw InvalidArgument("initial density needs at least two samples");
    const GaussianModel m = estimate_moments(samples);
    InitialDensity out{m.mean(), 0.0};
    if (method == InitialDensityMethod::GaussianCentral) {
        out.p0 = m.peak_density();
        return out;
    }
    if (!(sigma > 0.0)) throw InvalidArgument("neighbour counting needs a positive radius");
    std::size_t inside = 0;
    for (std::size_t i = 0; i < samples.rows(); ++i)
        if (squared_distance(samples.row(i), out.x0) <= sigma * sigma) ++inside;
    if (inside == 0)
        throw InvalidArgument("no samples within radius " + std::to_string(sigma) + " of the mean; use a larger sigma");
    out.p0 = static_cast<double>(inside) / (static_cast<double>(samples.rows()) * ball_volume(samples.cols(), sigma));
    return out;
}

void write_density_csv(const DensityField& field, std::ostream& out) {
    const std::size_t d = field.points.cols();
    for (std::size_t j = 0; j < d; ++j) out << 'x' << j << ',';
    out << "density\n";
    const auto old = out.precision(17);
    for (std::size_t i = 0; i < field.points.rows(); ++i) {
        for (std::size_t j = 0; j < d; ++j) out << field.points(i, j) << ',';
        out << field.density[i] << '\n';
    }
    out.precision(old);
}

}  // namespace scorelab
