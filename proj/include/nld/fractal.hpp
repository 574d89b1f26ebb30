#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "nld/detail/linfit.hpp"
#include "nld/series.hpp"

namespace nld {

using PlanarPoint = std::array<double, 2>;

/// Ordered polyline inside the unit square, the object the box counter
/// covers with grids.
class PlanarCurve {
public:
    explicit PlanarCurve(std::vector<PlanarPoint> points) : points_(std::move(points)) {
        if (points_.size() < 2)
            throw std::invalid_argument("PlanarCurve: need at least 2 points");
        for (const PlanarPoint& p : points_) {
            if (!(p[0] >= 0.0 && p[0] <= 1.0 && p[1] >= 0.0 && p[1] <= 1.0))
                throw std::invalid_argument("PlanarCurve: coordinates must lie in [0, 1]");
        }
    }

    const std::vector<PlanarPoint>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }

private:
    std::vector<PlanarPoint> points_;
};

/// Occupied-cell count at one box size.
struct BoxCount {
    double r = 0.0;     // box side length in (0, 1]
    std::size_t n = 0;  // occupied boxes
};

/// Log-log regression result of the box counting. d outside [0.8, 2.2] is
/// flagged rather than clamped; a plane-embedded curve should stay inside.
struct FractalFit {
    double d = 0.0;
    double r_squared = 0.0;
    std::vector<BoxCount> counts;
    bool d_in_range = true;  // d in [0.8, 2.2]
};

/// Translate and uniformly scale points so the larger extent spans [0, 1].
/// Aspect ratio is preserved (both axes share one scale factor).
inline PlanarCurve normalize_to_unit_square(std::span<const PlanarPoint> points) {
    if (points.size() < 2)
        throw std::invalid_argument("normalize_to_unit_square: need at least 2 points");
    double min_x = points[0][0], max_x = points[0][0];
    double min_y = points[0][1], max_y = points[0][1];
    for (const PlanarPoint& p : points) {
        min_x = std::min(min_x, p[0]);
        max_x = std::max(max_x, p[0]);
        min_y = std::min(min_y, p[1]);
        max_y = std::max(max_y, p[1]);
    }
    const double extent = std::max(max_x - min_x, max_y - min_y);
    if (!(extent > 0.0))
        throw std::invalid_argument("normalize_to_unit_square: degenerate point set");
    std::vector<PlanarPoint> out;
    out.reserve(points.size());
    for (const PlanarPoint& p : points)
        out.push_back({std::clamp((p[0] - min_x) / extent, 0.0, 1.0),
                       std::clamp((p[1] - min_y) / extent, 0.0, 1.0)});
    return PlanarCurve(std::move(out));
}

/// Graph of a signal as a curve filling the unit square in both axes:
/// point i = (i/(n-1), (x_i - min)/(max - min)).
inline PlanarCurve embed_signal(const SampledSeries& x) {
    if (x.size() < 2)
        throw std::invalid_argument("embed_signal: need at least 2 samples");
    const auto [lo_it, hi_it] = std::minmax_element(x.samples().begin(), x.samples().end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo))
        throw std::invalid_argument("embed_signal: constant signal has no amplitude to embed");
    const double n1 = static_cast<double>(x.size() - 1);
    std::vector<PlanarPoint> pts;
    pts.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        pts.push_back({static_cast<double>(i) / n1, (x[i] - lo) / (hi - lo)});
    return PlanarCurve(std::move(pts));
}

namespace detail {

/// Cell index under the half-open convention [k*r, (k+1)*r), with the
/// top/right boundary closed on the last cell.
inline std::int64_t grid_cell(double v, double r, std::int64_t m) {
    const auto k = static_cast<std::int64_t>(std::floor(v / r));
    return std::clamp<std::int64_t>(k, 0, m - 1);
}

/// Visit every cell a segment passes through (Amanatides-Woo traversal).
/// When the segment crosses a grid corner exactly, both indices step at once:
/// the corner itself belongs to the diagonal cell under the half-open
/// convention and the two side cells are not touched.
template <typename Visit>
inline void rasterize_segment(const PlanarPoint& p, const PlanarPoint& q, double r,
                              std::int64_t m, Visit&& visit) {
    std::int64_t cx = grid_cell(p[0], r, m);
    std::int64_t cy = grid_cell(p[1], r, m);
    const std::int64_t ex = grid_cell(q[0], r, m);
    const std::int64_t ey = grid_cell(q[1], r, m);
    visit(cx, cy);

    const double dx = q[0] - p[0];
    const double dy = q[1] - p[1];
    const std::int64_t step_x = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
    const std::int64_t step_y = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);
    const double inf = std::numeric_limits<double>::infinity();

    // crossing parameters are recomputed from the cell index each step (no
    // accumulated drift), so exact corner ties stay exact
    std::int64_t guard = 4 * m + 8;
    while ((cx != ex || cy != ey) && guard-- > 0) {
        const double tx = step_x != 0
                              ? ((static_cast<double>(cx) + (step_x > 0 ? 1.0 : 0.0)) * r - p[0]) / dx
                              : inf;
        const double ty = step_y != 0
                              ? ((static_cast<double>(cy) + (step_y > 0 ? 1.0 : 0.0)) * r - p[1]) / dy
                              : inf;
        if (tx < ty) {
            if (tx > 1.0) break;
            cx += step_x;
        } else if (ty < tx) {
            if (ty > 1.0) break;
            cy += step_y;
        } else {
            // exact corner crossing: diagonal step, side cells untouched
            if (!(tx <= 1.0)) break;
            cx += step_x;
            cy += step_y;
        }
        cx = std::clamp<std::int64_t>(cx, 0, m - 1);
        cy = std::clamp<std::int64_t>(cy, 0, m - 1);
        visit(cx, cy);
    }
    visit(ex, ey);
}

} // namespace detail

/// Number of grid cells of side r containing at least one curve point or one
/// segment crossing. Segments between consecutive points are rasterized so
/// thin diagonal curves are not undercounted.
inline BoxCount box_count(const PlanarCurve& curve, double r) {
    if (!(r > 0.0) || r > 1.0)
        throw std::invalid_argument("box_count: box size must lie in (0, 1]");
    const auto m = static_cast<std::int64_t>(std::ceil(1.0 / r));
    if (m > (std::int64_t{1} << 20))
        throw std::invalid_argument("box_count: box size below the 2^-20 resource guard");

    std::unordered_set<std::uint64_t> occupied;
    auto visit = [&](std::int64_t cx, std::int64_t cy) {
        occupied.insert(static_cast<std::uint64_t>(cx) * static_cast<std::uint64_t>(m) +
                        static_cast<std::uint64_t>(cy));
    };

    const auto& pts = curve.points();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        detail::rasterize_segment(pts[i], pts[i + 1], r, m, visit);
    visit(detail::grid_cell(pts.back()[0], r, m), detail::grid_cell(pts.back()[1], r, m));

    return {r, occupied.size()};
}

/// Default dyadic grid r = 2^-k, k = 1..depth.
inline std::vector<double> dyadic_grid(int depth = 8) {
    if (depth < 1 || depth > 20)
        throw std::invalid_argument("dyadic_grid: depth must lie in [1, 20]");
    std::vector<double> rs;
    rs.reserve(static_cast<std::size_t>(depth));
    for (int k = 1; k <= depth; ++k) rs.push_back(std::ldexp(1.0, -k));
    return rs;
}

/// Box-counting dimension: least-squares slope of log N against log(1/r).
inline FractalFit fractal_dimension(const PlanarCurve& curve, std::span<const double> grid) {
    if (grid.size() < 4)
        throw std::invalid_argument("fractal_dimension: need at least 4 grid sizes");
    FractalFit fit;
    std::vector<double> lx, ly;
    lx.reserve(grid.size());
    ly.reserve(grid.size());
    for (double r : grid) {
        const BoxCount bc = box_count(curve, r);
        fit.counts.push_back(bc);
        lx.push_back(std::log(1.0 / r));
        ly.push_back(std::log(static_cast<double>(bc.n)));
    }
    const detail::LineFit line = detail::fit_line(lx, ly);
    fit.d = line.slope;
    fit.r_squared = line.r_squared;
    fit.d_in_range = fit.d >= 0.8 && fit.d <= 2.2;
    return fit;
}

inline FractalFit fractal_dimension(const PlanarCurve& curve, int depth = 8) {
    const std::vector<double> grid = dyadic_grid(depth);
    return fractal_dimension(curve, grid);
}

} // namespace nld
