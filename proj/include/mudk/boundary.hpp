// SPDX-License-Identifier: Apache-2.0
//! \file mudk/boundary.hpp
//! Boundary curve t -> (q_n(|t|), H{q_n(|.|)}(pi t)) of the domain.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "distributions.hpp"
#include "errors.hpp"
#include "hilbert.hpp"
#include "step_quantile.hpp"

namespace mudk
{
struct BoundaryPoint
{
    double t;
    double x;
    double y;
};

//---------------------------------------------------------------------------//
/*!
 * Samples of the domain boundary ordered by parameter t in (-1, 1).
 *
 * Points come in mirrored pairs (t, x, y), (-t, x, -y). The recorded
 * (alpha, beta) compose every scale_domain applied so far; mesh is the grid
 * spacing of the source scheme in the current coordinates.
 */
struct BoundaryPolyline
{
    std::vector<BoundaryPoint> points;
    double shift = 0;
    double alpha = 1;
    double beta = 0;
    double mesh = 0;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }

    double max_abs_y() const
    {
        double m = 0;
        for (auto const& p : points)
            m = std::max(m, std::abs(p.y));
        return m;
    }
};

inline constexpr std::size_t default_boundary_points = 2048;

namespace detail
{
//! Parameters in (0, 1) kept at least 1/(4M) from every breakpoint.
inline std::vector<double> boundary_parameters(StepQuantile const& unit,
                                               std::size_t M)
{
    auto const bp = unit.breakpoints();
    std::vector<double> inner(bp.begin() + 1, bp.end() - 1);
    double const cell = 1.0 / static_cast<double>(M);
    double const guard = 0.25 * cell;

    auto breaks_between = [&](double lo, double hi) {
        auto first = std::upper_bound(inner.begin(), inner.end(), lo);
        auto last = std::lower_bound(inner.begin(), inner.end(), hi);
        return std::vector<double>(first, last);
    };

    std::vector<double> ts;
    ts.reserve(M + unit.steps());
    for (std::size_t i = 1; i <= M; ++i)
    {
        double const lo = static_cast<double>(i - 1) * cell;
        double const hi = static_cast<double>(i) * cell;
        double t = (static_cast<double>(i) - 0.5) * cell;
        if (breaks_between(t - guard, t + guard).empty())
        {
            ts.push_back(t);
            continue;
        }
        auto cuts = breaks_between(lo, hi);
        cuts.insert(cuts.begin(), lo);
        cuts.push_back(hi);
        double best = 0;
        for (std::size_t k = 1; k < cuts.size(); ++k)
        {
            if (cuts[k] - cuts[k - 1] > best)
            {
                best = cuts[k] - cuts[k - 1];
                t = 0.5 * (cuts[k] + cuts[k - 1]);
            }
        }
        ts.push_back(t);
    }

    // Every step of positive width gets at least one sample.
    std::sort(ts.begin(), ts.end());
    for (std::size_t j = 0; j < unit.steps(); ++j)
    {
        double const lo = bp[j];
        double const hi = bp[j + 1];
        if (!(hi - lo > 1e-8))
            continue;
        auto it = std::upper_bound(ts.begin(), ts.end(), lo);
        if (it == ts.end() || *it >= hi)
            ts.push_back(0.5 * (lo + hi));
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Sample the boundary on a pole-avoiding grid of M parameters per half.
 *
 * t_i = (i - 1/2) / M, moved to the middle of the widest breakpoint-free part
 * of its cell when closer than 1/(4M) to a breakpoint. Steps missed by the
 * grid receive their midpoint.
 */
inline BoundaryPolyline
boundary_points(StepQuantile const& sq, std::size_t M = default_boundary_points)
{
    if (M == 0)
    {
        throw DomainError("boundary needs at least one point per half");
    }
    auto const unit = sq.unit_restricted();
    auto const ts = detail::boundary_parameters(unit, M);

    std::vector<BoundaryPoint> half;
    half.reserve(ts.size());
    for (double t : ts)
    {
        half.push_back(
            {t, unit.eval(t), hilbert_step_quantile(unit, std::numbers::pi * t)});
    }

    BoundaryPolyline out;
    out.mesh = sq.mesh();
    out.points.reserve(2 * half.size());
    for (auto it = half.rbegin(); it != half.rend(); ++it)
    {
        out.points.push_back({-it->t, it->x, -it->y});
    }
    out.points.insert(out.points.end(), half.begin(), half.end());
    return out;
}

//! Image of the polyline under (x, y) -> (alpha x + beta, alpha y).
inline BoundaryPolyline
scale_domain(BoundaryPolyline const& bp, double alpha, double beta)
{
    if (alpha == 0 || !std::isfinite(alpha) || !std::isfinite(beta))
    {
        throw DomainError("scale_domain needs a finite nonzero alpha");
    }
    BoundaryPolyline out = bp;
    for (auto& p : out.points)
    {
        p.x = alpha * p.x + beta;
        p.y = alpha * p.y;
    }
    out.alpha = alpha * bp.alpha;
    out.beta = alpha * bp.beta + beta;
    out.mesh = std::abs(alpha) * bp.mesh;
    return out;
}

struct NormalizedLaw
{
    Distribution law;  //!< (X - a) / (b - a), supported in [0, 1]
    double alpha;      //!< b - a
    double beta;       //!< a
};

//! Affine rescaling of a bounded law onto [0, 1] and its inverse parameters.
inline NormalizedLaw normalize_support(Distribution const& dist)
{
    auto const s = dist.support();
    if (!s.bounded())
    {
        throw UnboundedSupportError(
            "normalization needs bounded support: truncate first");
    }
    if (!(s.width() > 0))
    {
        return {dist.affine(1, -s.a), 1, s.a};
    }
    double const w = s.width();
    return {dist.affine(1 / w, -s.a / w), w, s.a};
}

//---------------------------------------------------------------------------//
// EXPORT
//---------------------------------------------------------------------------//
inline std::string format_real(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

//! CSV with header t,x,y; each comment line is written first with "# ".
inline void write_boundary_csv(BoundaryPolyline const& bp, std::ostream& os,
                               std::vector<std::string> const& comments = {})
{
    for (auto const& c : comments)
        os << "# " << c << '\n';
    if (bp.mesh > 0)
        os << "# mesh " << format_real(bp.mesh) << '\n';
    os << "t,x,y\n";
    for (auto const& p : bp.points)
    {
        os << format_real(p.t) << ',' << format_real(p.x) << ','
           << format_real(p.y) << '\n';
    }
}

inline void write_boundary_csv(BoundaryPolyline const& bp,
                               std::string const& path,
                               std::vector<std::string> const& comments = {})
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError(path, "cannot open for writing");
    write_boundary_csv(bp, os, comments);
    if (!os.flush())
        throw IoError(path, "write failed");
}

//! Single closed path, equal aspect, 5% padding, larger side 1000 units.
inline void write_boundary_svg(BoundaryPolyline const& bp, std::ostream& os)
{
    if (bp.empty())
    {
        throw DomainError("cannot draw an empty boundary");
    }
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    double ymin = xmin;
    double ymax = -xmin;
    for (auto const& p : bp.points)
    {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    double extent = std::max(xmax - xmin, ymax - ymin);
    if (!(extent > 0))
        extent = 1;
    double const pad = 0.05 * extent;
    double const s = 1000 / (extent + 2 * pad);
    double const width = (xmax - xmin + 2 * pad) * s;
    double const height = (ymax - ymin + 2 * pad) * s;
    double const tx = -s * (xmin - pad);
    double const ty = s * (ymax + pad);

    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
       << "width=\"" << format_real(width) << "\" height=\""
       << format_real(height) << "\" viewBox=\"0 0 " << format_real(width)
       << ' ' << format_real(height) << "\">\n"
       << "<g transform=\"matrix(" << format_real(s) << " 0 0 "
       << format_real(-s) << ' ' << format_real(tx) << ' ' << format_real(ty)
       << ")\">\n"
       << "<path fill=\"none\" stroke=\"black\" stroke-width=\"1\" "
       << "vector-effect=\"non-scaling-stroke\" d=\"";
    char cmd = 'M';
    for (auto const& p : bp.points)
    {
        os << cmd << format_real(p.x) << ' ' << format_real(p.y) << ' ';
        cmd = 'L';
    }
    os << "Z\"/>\n</g>\n</svg>\n";
}

inline void write_boundary_svg(BoundaryPolyline const& bp,
                               std::string const& path)
{
    std::ostringstream buf;
    write_boundary_svg(bp, buf);
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError(path, "cannot open for writing");
    os << buf.str();
    if (!os.flush())
        throw IoError(path, "write failed");
}

//! Read a boundary CSV written by write_boundary_csv.
inline BoundaryPolyline read_boundary_csv(std::string const& path)
{
    std::ifstream is(path);
    if (!is)
        throw IoError(path, "cannot open for reading");
    BoundaryPolyline bp;
    std::string line;
    bool header = false;
    while (std::getline(is, line))
    {
        if (line.empty())
            continue;
        if (line[0] == '#')
        {
            std::istringstream ss(line.substr(1));
            std::string key;
            ss >> key;
            if (key == "mesh")
                ss >> bp.mesh;
            continue;
        }
        if (!header)
        {
            if (line.rfind("t,x,y", 0) != 0)
                throw IoError(path, "expected header t,x,y");
            header = true;
            continue;
        }
        BoundaryPoint p{};
        char c1 = 0;
        char c2 = 0;
        std::istringstream ss(line);
        if (!(ss >> p.t >> c1 >> p.x >> c2 >> p.y) || c1 != ',' || c2 != ',')
            throw IoError(path, "malformed row: " + line);
        bp.points.push_back(p);
    }
    if (!header)
        throw IoError(path, "missing header t,x,y");
    return bp;
}

}  // namespace mudk
