// SPDX-License-Identifier: Apache-2.0
//! \file mudk/domain_polygon.hpp
//! Even-odd membership test for the region bounded by a boundary polyline.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "boundary.hpp"
#include "errors.hpp"

namespace mudk
{
//! Gaps wider than this many mesh widths open onto vertical rays.
inline constexpr double open_gap_factor = 2.5;

inline constexpr double boundary_tolerance = 1e-12;

struct Point2
{
    double x;
    double y;
};

//---------------------------------------------------------------------------//
/*!
 * Closed polygon of a boundary polyline, with open gaps.
 *
 * Runs of equal x keep their end points and the points where y turns back,
 * so slits traced down and up again survive as doubled edges. The polygon
 * may touch itself along such slits but must not cross itself. A
 * consecutive pair whose x values differ by more than 2.5 mesh widths is a
 * gap where the boundary escapes to infinity; its edge is replaced by two
 * vertical rays toward the side given by the sign of y_i + y_{i+1}.
 *
 * Membership uses a uniform grid: cells free of edges carry a precomputed
 * answer, other cells start from a reference point and count crossings.
 */
class DomainPolygon
{
  public:
    struct Edge
    {
        Point2 a;
        Point2 b;  //!< b.y may be +-infinity for a vertical ray
        bool ray() const { return std::isinf(b.y); }
    };

    explicit DomainPolygon(BoundaryPolyline const& bp)
    {
        if (bp.size() < 3)
        {
            throw TopologyError("boundary needs at least three points");
        }
        auto const pts = collapse(bp);
        build_edges(pts, bp.mesh);
        check_simple();
        build_grid();
    }

    std::vector<Edge> const& edges() const { return edges_; }
    std::size_t open_gaps() const { return gaps_; }
    double x_min() const { return xmin_; }
    double x_max() const { return xmax_; }
    double y_cap() const { return ycap_; }

    //! Inside or within 1e-12 of the boundary.
    bool contains(Point2 p) const
    {
        if (!(p.x >= xmin_ - boundary_tolerance
              && p.x <= xmax_ + boundary_tolerance))
            return false;
        if (std::abs(p.y) > ycap_)
            return contains_beyond_cap(p);
        auto const ix = cell_x(p.x);
        auto const iy = cell_y(p.y);
        auto const& c = cells_[iy * nx_ + ix];
        if (c.begin == c.end)
            return c.inside;
        bool inside = c.inside;
        for (std::uint32_t k = c.begin; k != c.end; ++k)
        {
            auto const& e = edges_[cell_edges_[k]];
            if (on_segment(e, p))
                return true;
            switch (crossing(c.ref, p, e))
            {
                case Cross::none:
                    break;
                case Cross::proper:
                    inside = !inside;
                    break;
                case Cross::degenerate:
                    return contains_slow(p);
            }
        }
        return inside;
    }

    /*!
     * First point where the segment p -> q meets the boundary.
     *
     * Slits traced twice by the boundary have the domain on both sides, so
     * leaving the domain is detected by crossing rather than by membership.
     */
    std::optional<Point2> first_crossing(Point2 p, Point2 q) const
    {
        double best = std::numeric_limits<double>::infinity();
        double const pad = 2 * boundary_tolerance;
        double const lo_x = std::min(p.x, q.x) - pad;
        double const hi_x = std::max(p.x, q.x) + pad;
        double const lo_y = std::min(p.y, q.y) - pad;
        double const hi_y = std::max(p.y, q.y) + pad;
        if (hi_x >= xmin_ && lo_x <= xmax_ && hi_y >= -ycap_ && lo_y <= ycap_)
        {
            std::size_t const x0 = cell_x(lo_x);
            std::size_t const x1 = cell_x(hi_x);
            std::size_t const y0 = cell_y(lo_y);
            std::size_t const y1 = cell_y(hi_y);
            for (std::size_t iy = y0; iy <= y1; ++iy)
            {
                for (std::size_t ix = x0; ix <= x1; ++ix)
                {
                    auto const& c = cells_[iy * nx_ + ix];
                    for (std::uint32_t k = c.begin; k != c.end; ++k)
                    {
                        best = std::min(
                            best, hit_param(p, q, finite(edges_[cell_edges_[k]])));
                    }
                }
            }
        }
        if (hi_y > ycap_ || lo_y < -ycap_)
        {
            for (auto i : rays_)
                best = std::min(best, hit_param(p, q, edges_[i]));
        }
        if (!std::isfinite(best))
            return std::nullopt;
        return Point2{p.x + best * (q.x - p.x), p.y + best * (q.y - p.y)};
    }

    //! Reference even-odd test against every edge.
    bool contains_slow(Point2 p) const
    {
        bool inside = false;
        for (auto const& e : edges_)
        {
            if (on_segment(e, p))
                return true;
            if (ray_crosses(e, p))
                inside = !inside;
        }
        return inside;
    }

  private:
    enum class Cross
    {
        none,
        proper,
        degenerate
    };

    struct Cell
    {
        std::uint32_t begin = 0;
        std::uint32_t end = 0;
        bool inside = false;
        Point2 ref{};
    };

    std::vector<Edge> edges_;
    std::vector<std::size_t> rays_;
    std::size_t gaps_ = 0;
    double xmin_ = 0;
    double xmax_ = 0;
    double ycap_ = 0;
    std::size_t nx_ = 0;
    std::size_t ny_ = 0;
    double dx_ = 0;
    double dy_ = 0;
    std::vector<Cell> cells_;
    std::vector<std::uint32_t> cell_edges_;

    //! Drop the interior points of vertical runs except where y turns back.
    static std::vector<Point2> collapse(BoundaryPolyline const& bp)
    {
        auto const& pts = bp.points;
        std::size_t const m = pts.size();
        // Start at the beginning of a run so no run wraps around.
        std::size_t start = 0;
        while (start < m && pts[start].x == pts[(start + m - 1) % m].x)
            ++start;
        if (start == m)
            throw TopologyError("boundary is a single vertical line");

        std::vector<Point2> out;
        std::size_t i = 0;
        while (i < m)
        {
            std::size_t j = i;
            auto at = [&](std::size_t k) { return pts[(start + k) % m]; };
            while (j + 1 < m && at(j + 1).x == at(i).x)
                ++j;
            auto keep = [&](std::size_t k) {
                Point2 const p{at(k).x, at(k).y};
                if (out.empty() || out.back().x != p.x || out.back().y != p.y)
                    out.push_back(p);
            };
            keep(i);
            int dir = 0;
            for (std::size_t k = i + 1; k <= j; ++k)
            {
                double const d = at(k).y - at(k - 1).y;
                if (d == 0)
                    continue;
                int const sign = d > 0 ? 1 : -1;
                if (dir != 0 && sign != dir)
                    keep(k - 1);
                dir = sign;
            }
            keep(j);
            i = j + 1;
        }
        return out;
    }

    void build_edges(std::vector<Point2> const& pts, double mesh)
    {
        double const gap = mesh > 0 ? open_gap_factor * mesh
                                    : std::numeric_limits<double>::infinity();
        std::size_t const m = pts.size();
        for (std::size_t i = 0; i < m; ++i)
        {
            Point2 const a = pts[i];
            Point2 const b = pts[(i + 1) % m];
            if (std::abs(b.x - a.x) > gap)
            {
                double const dir = (a.y + b.y) >= 0
                                       ? std::numeric_limits<double>::infinity()
                                       : -std::numeric_limits<double>::infinity();
                rays_.push_back(edges_.size());
                edges_.push_back({a, {a.x, dir}});
                rays_.push_back(edges_.size());
                edges_.push_back({b, {b.x, dir}});
                ++gaps_;
                continue;
            }
            if (a.x == b.x && a.y == b.y)
                continue;
            edges_.push_back({a, b});
        }
        xmin_ = std::numeric_limits<double>::infinity();
        xmax_ = -xmin_;
        for (auto const& p : pts)
        {
            xmin_ = std::min(xmin_, p.x);
            xmax_ = std::max(xmax_, p.x);
            ycap_ = std::max(ycap_, std::abs(p.y));
        }
        ycap_ = ycap_ * (1 + 1e-9) + 1e-9;
    }

    static double orient(Point2 a, Point2 b, Point2 c)
    {
        return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    }

    Edge finite(Edge e) const
    {
        if (e.ray())
            e.b.y = std::copysign(4 * ycap_ + 1, e.b.y);
        return e;
    }

    //! Proper crossings between non-adjacent edges.
    void check_simple() const
    {
        std::size_t const m = edges_.size();
        std::vector<Edge> fe(m);
        for (std::size_t i = 0; i < m; ++i)
            fe[i] = finite(edges_[i]);
        std::vector<std::size_t> order(m);
        for (std::size_t i = 0; i < m; ++i)
            order[i] = i;
        auto lo_x = [&](std::size_t i) { return std::min(fe[i].a.x, fe[i].b.x); };
        auto hi_x = [&](std::size_t i) { return std::max(fe[i].a.x, fe[i].b.x); };
        std::sort(order.begin(), order.end(),
                  [&](std::size_t i, std::size_t j) { return lo_x(i) < lo_x(j); });
        for (std::size_t oi = 0; oi < m; ++oi)
        {
            std::size_t const i = order[oi];
            for (std::size_t oj = oi + 1; oj < m && lo_x(order[oj]) <= hi_x(i);
                 ++oj)
            {
                std::size_t const j = order[oj];
                if (adjacent(fe[i], fe[j]))
                    continue;
                if (intersects(fe[i], fe[j]))
                {
                    throw TopologyError(
                        "boundary polygon intersects itself near ("
                        + std::to_string(fe[i].a.x) + ", "
                        + std::to_string(fe[i].a.y) + ")");
                }
            }
        }
    }

    static bool same(Point2 p, Point2 q) { return p.x == q.x && p.y == q.y; }

    static bool adjacent(Edge const& e, Edge const& f)
    {
        return same(e.a, f.a) || same(e.a, f.b) || same(e.b, f.a)
               || same(e.b, f.b);
    }

    //! Proper crossing; touching and collinear overlap are allowed.
    static bool intersects(Edge const& e, Edge const& f)
    {
        if (std::max(e.a.y, e.b.y) < std::min(f.a.y, f.b.y)
            || std::max(f.a.y, f.b.y) < std::min(e.a.y, e.b.y))
            return false;
        double const d1 = orient(e.a, e.b, f.a);
        double const d2 = orient(e.a, e.b, f.b);
        double const d3 = orient(f.a, f.b, e.a);
        double const d4 = orient(f.a, f.b, e.b);
        return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0))
               && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
    }

    static bool on_segment(Edge const& e, Point2 p)
    {
        if (e.ray())
        {
            bool const along = e.b.y > 0 ? p.y >= e.a.y : p.y <= e.a.y;
            return along && std::abs(p.x - e.a.x) <= boundary_tolerance;
        }
        double const dx = e.b.x - e.a.x;
        double const dy = e.b.y - e.a.y;
        double const len2 = dx * dx + dy * dy;
        double s = len2 > 0 ? ((p.x - e.a.x) * dx + (p.y - e.a.y) * dy) / len2
                            : 0;
        s = std::clamp(s, 0.0, 1.0);
        double const ex = e.a.x + s * dx - p.x;
        double const ey = e.a.y + s * dy - p.y;
        return ex * ex + ey * ey <= boundary_tolerance * boundary_tolerance;
    }

    //! Half-open crossing of the rightward ray from p.
    static bool ray_crosses(Edge const& e, Point2 p)
    {
        if ((e.a.y > p.y) == (e.b.y > p.y))
            return false;
        double x = e.a.x;
        if (!e.ray() && e.a.x != e.b.x)
            x = e.a.x + (p.y - e.a.y) * (e.b.x - e.a.x) / (e.b.y - e.a.y);
        return x > p.x;
    }

    //! Crossing of segment r -> p with an edge.
    Cross crossing(Point2 r, Point2 p, Edge const& e0) const
    {
        Edge const e = finite(e0);
        double const d1 = orient(r, p, e.a);
        double const d2 = orient(r, p, e.b);
        if ((d1 > 0 && d2 > 0) || (d1 < 0 && d2 < 0))
            return Cross::none;
        double const d3 = orient(e.a, e.b, r);
        double const d4 = orient(e.a, e.b, p);
        if ((d3 > 0 && d4 > 0) || (d3 < 0 && d4 < 0))
            return Cross::none;
        if (d1 == 0 || d2 == 0 || d3 == 0 || d4 == 0)
            return Cross::degenerate;
        return Cross::proper;
    }

    //! Parameter s in [0, 1] where p + s (q - p) meets the edge, else inf.
    static double hit_param(Point2 p, Point2 q, Edge const& e)
    {
        constexpr double none = std::numeric_limits<double>::infinity();
        constexpr double slack = 1e-12;
        double const dx = q.x - p.x;
        double const dy = q.y - p.y;
        if (e.ray())
        {
            if (dx == 0)
                return none;
            double const s = (e.a.x - p.x) / dx;
            if (s < -slack || s > 1 + slack)
                return none;
            double const y = p.y + s * dy;
            bool const along = e.b.y > 0 ? y >= e.a.y : y <= e.a.y;
            return along ? std::clamp(s, 0.0, 1.0) : none;
        }
        double const ex = e.b.x - e.a.x;
        double const ey = e.b.y - e.a.y;
        double const denom = dx * ey - dy * ex;
        double const wx = e.a.x - p.x;
        double const wy = e.a.y - p.y;
        if (denom == 0)
        {
            if (wx * dy - wy * dx != 0)
                return none;
            // Collinear: first parameter of the overlap, if any.
            double const len2 = dx * dx + dy * dy;
            if (len2 == 0)
                return none;
            double s0 = (wx * dx + wy * dy) / len2;
            double s1 = ((e.b.x - p.x) * dx + (e.b.y - p.y) * dy) / len2;
            if (s0 > s1)
                std::swap(s0, s1);
            if (s1 < 0 || s0 > 1)
                return none;
            return std::max(s0, 0.0);
        }
        double const s = (wx * ey - wy * ex) / denom;
        double const t = (wx * dy - wy * dx) / denom;
        if (s < -slack || s > 1 + slack || t < -slack || t > 1 + slack)
            return none;
        return std::clamp(s, 0.0, 1.0);
    }

    bool contains_beyond_cap(Point2 p) const
    {
        bool inside = false;
        for (auto i : rays_)
        {
            auto const& e = edges_[i];
            if (on_segment(e, p))
                return true;
            if (ray_crosses(e, p))
                inside = !inside;
        }
        return inside;
    }

    std::size_t cell_x(double x) const
    {
        auto i = static_cast<std::ptrdiff_t>((x - xmin_) / dx_);
        return static_cast<std::size_t>(
            std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(nx_) - 1));
    }

    std::size_t cell_y(double y) const
    {
        auto i = static_cast<std::ptrdiff_t>((y + ycap_) / dy_);
        return static_cast<std::size_t>(
            std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(ny_) - 1));
    }

    void build_grid()
    {
        double const side = std::sqrt(static_cast<double>(edges_.size()));
        nx_ = std::clamp<std::size_t>(static_cast<std::size_t>(8 * side), 64, 1024);
        ny_ = nx_;
        double const width = std::max(xmax_ - xmin_, 1e-300);
        dx_ = width / static_cast<double>(nx_);
        dy_ = 2 * ycap_ / static_cast<double>(ny_);

        std::vector<std::vector<std::uint32_t>> lists(nx_ * ny_);
        for (std::size_t k = 0; k < edges_.size(); ++k)
        {
            auto const e = finite(edges_[k]);
            // Pad by the tolerance so near-boundary points see the edge.
            double const pad = 2 * boundary_tolerance;
            std::size_t const x0 = cell_x(std::min(e.a.x, e.b.x) - pad);
            std::size_t const x1 = cell_x(std::max(e.a.x, e.b.x) + pad);
            std::size_t const y0 = cell_y(std::min(e.a.y, e.b.y) - pad);
            std::size_t const y1 = cell_y(std::max(e.a.y, e.b.y) + pad);
            for (std::size_t iy = y0; iy <= y1; ++iy)
            {
                for (std::size_t ix = x0; ix <= x1; ++ix)
                {
                    if (edge_meets_cell(e, ix, iy))
                        lists[iy * nx_ + ix].push_back(static_cast<std::uint32_t>(k));
                }
            }
        }

        cells_.assign(nx_ * ny_, Cell{});
        cell_edges_.clear();
        for (std::size_t iy = 0; iy < ny_; ++iy)
        {
            for (std::size_t ix = 0; ix < nx_; ++ix)
            {
                auto& c = cells_[iy * nx_ + ix];
                auto const& list = lists[iy * nx_ + ix];
                c.begin = static_cast<std::uint32_t>(cell_edges_.size());
                cell_edges_.insert(cell_edges_.end(), list.begin(), list.end());
                c.end = static_cast<std::uint32_t>(cell_edges_.size());
                c.ref = reference_point(ix, iy, list);
                c.inside = contains_slow(c.ref);
            }
        }
    }

    //! Conservative: edge bounding box overlaps the cell and the edge line
    //! passes within the cell's slab.
    bool edge_meets_cell(Edge const& e, std::size_t ix, std::size_t iy) const
    {
        double const pad = 2 * boundary_tolerance;
        double const cx0 = xmin_ + static_cast<double>(ix) * dx_ - pad;
        double const cx1 = cx0 + dx_ + 2 * pad;
        double const cy0 = -ycap_ + static_cast<double>(iy) * dy_ - pad;
        double const cy1 = cy0 + dy_ + 2 * pad;
        Point2 const corners[4]
            = {{cx0, cy0}, {cx1, cy0}, {cx1, cy1}, {cx0, cy1}};
        bool pos = false;
        bool neg = false;
        for (auto const& c : corners)
        {
            double const o = orient(e.a, e.b, c);
            pos = pos || o >= 0;
            neg = neg || o <= 0;
        }
        return pos && neg;
    }

    //! Point of the cell kept clear of its edges.
    Point2 reference_point(std::size_t ix, std::size_t iy,
                           std::vector<std::uint32_t> const& list) const
    {
        double const x0 = xmin_ + static_cast<double>(ix) * dx_;
        double const y0 = -ycap_ + static_cast<double>(iy) * dy_;
        double const fractions[] = {0.5, 0.3711, 0.6289, 0.1973, 0.8027};
        Point2 best{x0 + 0.5 * dx_, y0 + 0.5 * dy_};
        double best_clear = -1;
        for (double fx : fractions)
        {
            for (double fy : fractions)
            {
                Point2 const r{x0 + fx * dx_, y0 + fy * dy_};
                double clear = std::numeric_limits<double>::infinity();
                for (auto k : list)
                    clear = std::min(clear, distance(finite(edges_[k]), r));
                if (clear > best_clear)
                {
                    best_clear = clear;
                    best = r;
                }
                if (clear > 1e-3 * std::min(dx_, dy_))
                    return r;
            }
        }
        return best;
    }

    static double distance(Edge const& e, Point2 p)
    {
        double const dx = e.b.x - e.a.x;
        double const dy = e.b.y - e.a.y;
        double const len2 = dx * dx + dy * dy;
        double s = len2 > 0 ? ((p.x - e.a.x) * dx + (p.y - e.a.y) * dy) / len2
                            : 0;
        s = std::clamp(s, 0.0, 1.0);
        return std::hypot(e.a.x + s * dx - p.x, e.a.y + s * dy - p.y);
    }
};

//! Membership of p in the domain bounded by bp, boundary included.
inline bool point_in_domain(BoundaryPolyline const& bp, Point2 p)
{
    return DomainPolygon(bp).contains(p);
}

}  // namespace mudk
