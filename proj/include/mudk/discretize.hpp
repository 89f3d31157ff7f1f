// SPDX-License-Identifier: Apache-2.0
//! \file mudk/discretize.hpp
//! Finitely supported approximations mu_n on a uniform grid, their step
//! quantiles, L1 distances to the target quantile and the rate bounds.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "distributions.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "step_quantile.hpp"

namespace mudk
{
//! Uniform grid x_k = a + (b - a) k / n, k = 0..n.
inline std::vector<double> grid(double a, double b, std::size_t n)
{
    if (n == 0)
    {
        throw DomainError("grid needs n >= 1");
    }
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    {
        throw DomainError("grid needs finite a < b");
    }
    std::vector<double> x(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
    {
        x[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(n);
    }
    x.back() = b;
    return x;
}

namespace detail
{
inline Support bounded_support(Distribution const& dist)
{
    auto s = dist.support();
    if (!s.bounded())
    {
        throw UnboundedSupportError(
            "support is unbounded: truncate the distribution before "
            "discretizing");
    }
    return s;
}

//! Collects consecutive level segments into a StepQuantile.
class StepBuilder
{
  public:
    explicit StepBuilder(double mesh) : mesh_(mesh) {}

    void push(double width, double value, bool atom)
    {
        if (!(width > 0))
            return;
        level_ += width;
        bp_.push_back(level_);
        values_.push_back(value);
        if (atom)
            atoms_.push_back(values_.size() - 1);
    }

    //! Append a segment ending at the absolute level hi.
    void push_to(double hi, double value, bool atom)
    {
        if (!(hi > level_))
            return;
        bp_.push_back(hi);
        values_.push_back(value);
        level_ = hi;
        if (atom)
            atoms_.push_back(values_.size() - 1);
    }

    double level() const { return level_; }

    StepQuantile finish(bool snap_to_one)
    {
        if (snap_to_one && std::abs(bp_.back() - 1) < 1e-12)
            bp_.back() = 1;
        return StepQuantile(std::move(bp_), std::move(values_),
                            std::move(atoms_), mesh_);
    }

  private:
    double mesh_;
    double level_ = 0;
    std::vector<double> bp_{0};
    std::vector<double> values_;
    std::vector<std::size_t> atoms_;
};

inline StepQuantile atoms_only(std::vector<Atom> const& atoms, double mesh)
{
    StepBuilder steps(mesh);
    double running = 0;
    for (auto const& atom : atoms)
    {
        running += atom.mass;
        steps.push_to(running, atom.location, true);
    }
    return steps.finish(true);
}

inline bool pure_atoms(Distribution const& dist)
{
    return !dist.atoms().empty() && dist.continuous_mass() < 1e-12;
}

//! Atoms whose location lies within tol of [lo, hi].
inline std::pair<std::size_t, std::size_t>
atoms_in(std::vector<Atom> const& atoms, double lo, double hi, double tol)
{
    auto first = std::lower_bound(
        atoms.begin(), atoms.end(), lo - tol,
        [](Atom const& a, double v) { return a.location < v; });
    auto last = std::upper_bound(
        atoms.begin(), atoms.end(), hi + tol,
        [](double v, Atom const& a) { return v < a.location; });
    return {static_cast<std::size_t>(first - atoms.begin()),
            static_cast<std::size_t>(last - atoms.begin())};
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Step quantile of mu_n = sum (F(x_k) - F(x_{k-1})) delta_{x_k} + sum p_i
 * delta_{a_i}.
 *
 * Grid cells whose closure meets an atom are dropped from the first sum; the
 * atom keeps its own level interval (F(a^-), F(a)). The continuous mass of a
 * dropped cell stays at its levels and takes the value of the atom bounding
 * it, so the result is a monotone quantile of total mass 1.
 */
inline StepQuantile build_measure_cdf(Distribution const& dist, std::size_t n)
{
    auto const s = detail::bounded_support(dist);
    if (n == 0)
    {
        throw DomainError("discretization needs n >= 1");
    }
    auto const atoms = dist.atoms();
    if (detail::pure_atoms(dist) || !(s.width() > 0))
    {
        return detail::atoms_only(atoms, s.width() / static_cast<double>(n));
    }

    auto const x = grid(s.a, s.b, n);
    double const tol = 1e-12 * s.width();
    detail::StepBuilder steps(s.width() / static_cast<double>(n));

    for (std::size_t k = 1; k <= n; ++k)
    {
        double const l = x[k - 1];
        double const r = x[k];
        auto [first, last] = detail::atoms_in(atoms, l, r, tol);
        if (first == last)
        {
            steps.push_to(dist.cdf(r), r, false);
            continue;
        }
        // Skipped cell: continuous pieces take the value of a bounding atom.
        double cursor_value = l;
        for (std::size_t i = first; i < last; ++i)
        {
            double const a = atoms[i].location;
            if (dist.cdf(a) <= steps.level())
            {
                // Shared with the previous cell and already emitted.
                cursor_value = a;
                continue;
            }
            steps.push_to(dist.cdf_left(a), a, false);
            steps.push_to(dist.cdf(a), a, true);
            cursor_value = a;
        }
        if (std::abs(r - atoms[last - 1].location) > tol)
        {
            steps.push_to(dist.cdf(r), cursor_value, false);
        }
    }
    return steps.finish(true);
}

//---------------------------------------------------------------------------//
/*!
 * Density-weighted variant: step k carries mass f(x_{k-1}) (b - a) / n.
 *
 * Breakpoints are sigma_k = (b - a) / n (f(a) + ... + f(x_{k-1})) and need not
 * end at 1. Atoms are inserted in location order with their exact masses.
 */
inline StepQuantile build_measure_pdf(Distribution const& dist, std::size_t n)
{
    auto const s = detail::bounded_support(dist);
    if (n == 0)
    {
        throw DomainError("discretization needs n >= 1");
    }
    if (!dist.has_density() || !(s.width() > 0))
    {
        throw UnsupportedFamilyError(
            "density-weighted scheme needs a law with a density part");
    }
    auto const atoms = dist.atoms();
    auto const x = grid(s.a, s.b, n);
    double const h = s.width() / static_cast<double>(n);
    double const tol = 1e-12 * s.width();
    detail::StepBuilder steps(h);
    std::size_t next_atom = 0;

    for (std::size_t k = 1; k <= n; ++k)
    {
        auto [first, last] = detail::atoms_in(atoms, x[k - 1], x[k], tol);
        if (first == last)
        {
            steps.push(h * dist.density(x[k - 1]), x[k], false);
            continue;
        }
        for (std::size_t i = std::max(first, next_atom); i < last; ++i)
        {
            steps.push(atoms[i].mass, atoms[i].location, true);
            next_atom = i + 1;
        }
    }
    return steps.finish(false);
}

//---------------------------------------------------------------------------//
// L1 DISTANCES
//---------------------------------------------------------------------------//
namespace detail
{
inline constexpr double l1_tolerance = 1e-10;

//! Integral of |g0 + (g1 - g0) s| over s in [0, 1], times width.
inline double abs_linear_integral(double g0, double g1, double width)
{
    if ((g0 >= 0) == (g1 >= 0) || g0 == 0 || g1 == 0)
    {
        return 0.5 * std::abs(g0 + g1) * width;
    }
    double const root = g0 / (g0 - g1);
    return 0.5 * (std::abs(g0) * root + std::abs(g1) * (1 - root)) * width;
}

inline std::vector<double> level_partition(Distribution const& dist,
                                           std::span<double const> extra,
                                           double lo, double hi)
{
    std::vector<double> levels(extra.begin(), extra.end());
    for (auto const& atom : dist.atoms())
    {
        levels.push_back(dist.cdf_left(atom.location));
        levels.push_back(dist.cdf(atom.location));
    }
    for (double l : dist.affine_levels())
    {
        levels.push_back(l);
    }
    levels.push_back(lo);
    levels.push_back(hi);
    std::erase_if(levels, [&](double l) { return l < lo || l > hi; });
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    return levels;
}

//! True if q is affine on (u0, u1) by the law's own description.
inline bool affine_on(Distribution const& dist,
                      std::vector<double> const& affine_levels,
                      std::vector<Atom> const& atoms, double u0, double u1)
{
    if (!affine_levels.empty())
    {
        auto it = std::upper_bound(affine_levels.begin(), affine_levels.end(),
                                   u0);
        if (it != affine_levels.end() && u1 <= *it)
            return true;
    }
    for (auto const& atom : atoms)
    {
        if (u0 >= dist.cdf_left(atom.location) && u1 <= dist.cdf(atom.location))
            return true;
    }
    return false;
}

//! Integral of |q(u) - c| over (u0, u1) for a bounded law.
inline double abs_gap_bounded(Distribution const& dist,
                              std::vector<double> const& affine_levels,
                              std::vector<Atom> const& atoms, double u0,
                              double u1, double c)
{
    double const w = u1 - u0;
    if (affine_on(dist, affine_levels, atoms, u0, u1))
    {
        double const p1 = u0 + 0.25 * w;
        double const p2 = u0 + 0.75 * w;
        double const q1 = dist.quantile(p1);
        double const q2 = dist.quantile(p2);
        double const slope = (q2 - q1) / (p2 - p1);
        double const g0 = q1 - slope * (p1 - u0) - c;
        double const g1 = q2 + slope * (u1 - p2) - c;
        return abs_linear_integral(g0, g1, w);
    }
    // q < c below F(c^-) and q > c above F(c)
    double const s1 = std::clamp(dist.cdf_left(c), u0, u1);
    double const s2 = std::clamp(dist.cdf(c), s1, u1);
    auto piece = [&](double lo, double hi) {
        if (!(hi > lo))
            return 0.0;
        auto f = [&](double u) {
            double const q = (u == lo) ? (u <= 0 ? dist.support().a
                                                 : dist.strict_quantile(u))
                                       : dist.quantile_limit(u);
            return std::abs(q - c);
        };
        return integrate_simpson(f, lo, hi, l1_tolerance * (hi - lo));
    };
    return piece(u0, s1) + piece(s2, u1);
}

//! Integral of |q(u) - c| over (u0, u1) when q may be unbounded at the ends.
inline double abs_gap_open(Distribution const& dist, double u0, double u1,
                           double c)
{
    auto f = [&](double u) { return std::abs(dist.quantile(u) - c); };
    return integrate_endpoint_singular(f, u0, u1, l1_tolerance);
}

inline double abs_gap_integral(Distribution const& dist,
                               StepQuantile const& sq, double lo, double hi)
{
    auto const unit = sq.unit_restricted();
    auto const levels = level_partition(dist, unit.breakpoints(), lo, hi);
    bool const bounded = dist.support().bounded();
    auto const affine_levels = dist.affine_levels();
    auto const atoms = dist.atoms();
    double total = 0;
    for (std::size_t i = 1; i < levels.size(); ++i)
    {
        double const u0 = levels[i - 1];
        double const u1 = levels[i];
        if (!(u1 > u0))
            continue;
        double const c = unit.eval(0.5 * (u0 + u1));
        total += bounded
                     ? abs_gap_bounded(dist, affine_levels, atoms, u0, u1, c)
                     : abs_gap_open(dist, u0, u1, c);
    }
    return total;
}

inline double abs_gap_integral(Distribution const& p, Distribution const& q,
                               double lo, double hi)
{
    std::vector<double> extra;
    for (auto const& atom : q.atoms())
    {
        extra.push_back(q.cdf_left(atom.location));
        extra.push_back(q.cdf(atom.location));
    }
    for (double l : q.affine_levels())
    {
        extra.push_back(l);
    }
    auto const levels = level_partition(p, extra, lo, hi);
    double total = 0;
    for (std::size_t i = 1; i < levels.size(); ++i)
    {
        auto f = [&](double u) {
            return std::abs(p.quantile(u) - q.quantile(u));
        };
        total += integrate_endpoint_singular(f, levels[i - 1], levels[i],
                                             l1_tolerance);
    }
    return total;
}
}  // namespace detail

/*!
 * L1 distance between the target quantile and a step quantile on (0, 1).
 *
 * Integration runs cell by cell on the partition refined by the step
 * breakpoints, the law's atom levels and the levels where its quantile is
 * known to be affine. Affine cells are integrated exactly; other cells use
 * adaptive Simpson with an overall absolute tolerance of 1e-10.
 */
inline double l1_distance(Distribution const& dist, StepQuantile const& sq)
{
    return detail::abs_gap_integral(dist, sq, 0, 1);
}

//! Exact L1 distance between two step quantiles viewed on (0, 1).
inline double l1_distance(StepQuantile const& lhs, StepQuantile const& rhs)
{
    auto const a = lhs.unit_restricted();
    auto const b = rhs.unit_restricted();
    std::vector<double> levels(a.breakpoints().begin(), a.breakpoints().end());
    levels.insert(levels.end(), b.breakpoints().begin(), b.breakpoints().end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    double total = 0;
    for (std::size_t i = 1; i < levels.size(); ++i)
    {
        double const w = levels[i] - levels[i - 1];
        if (!(w > 0))
            continue;
        double const mid = 0.5 * (levels[i] + levels[i - 1]);
        total += w * std::abs(a.eval(mid) - b.eval(mid));
    }
    return total;
}

//! L1 distance between two quantile functions; either may be unbounded.
inline double quantile_l1_distance(Distribution const& p, Distribution const& q)
{
    return detail::abs_gap_integral(p, q, 0, 1);
}

//---------------------------------------------------------------------------//
// RATE BOUNDS
//---------------------------------------------------------------------------//
struct RefinedRateBound
{
    double alpha;
    double beta;
    double value;  //!< alpha / n + beta / n^2
};

struct RateBound
{
    double bound;  //!< (b - a) / n + varpi
    double varpi;  //!< atom correction, 0 for atomless laws
    std::optional<RefinedRateBound> refined;
};

/*!
 * Upper bound on ||q - q_n||_1 for the c.d.f. scheme.
 *
 * With a_0 = a, a_{s+1} = b and h = (b - a) / n, the atom correction is
 *   varpi = sum_i |a_i| (F(a_i^-) - F(a_i - h))
 *                + |a_{i-1} + h| (F(a_{i-1} + h) - F(a_{i-1}))
 * over the non-empty gaps (a_{i-1}, a_i); shifted arguments are clamped to
 * the gap. When the law has a bounded density on each gap, the refined bound
 * alpha / n + beta / n^2 uses the density sup on each gap.
 */
inline RateBound rate_bound(Distribution const& dist, std::size_t n)
{
    auto const s = detail::bounded_support(dist);
    if (n == 0)
    {
        throw DomainError("rate bound needs n >= 1");
    }
    double const h = s.width() / static_cast<double>(n);
    auto const atoms = dist.atoms();

    std::vector<double> ends{s.a};
    for (auto const& atom : atoms)
    {
        ends.push_back(atom.location);
    }
    ends.push_back(s.b);
    double const tol = 1e-12 * std::max(s.width(), 1.0);

    RateBound result{h, 0, std::nullopt};
    if (!atoms.empty())
    {
        for (std::size_t i = 1; i < ends.size(); ++i)
        {
            double const lo = ends[i - 1];
            double const hi = ends[i];
            if (!(hi - lo > tol))
                continue;
            double const left_edge = std::max(hi - h, lo);
            double const right_edge = std::min(lo + h, hi);
            result.varpi
                += std::abs(hi) * std::max(dist.cdf_left(hi) - dist.cdf(left_edge), 0.0)
                   + std::abs(lo + h)
                         * std::max(dist.cdf_left(right_edge) - dist.cdf(lo), 0.0);
        }
        result.bound = h + result.varpi;
    }

    if (dist.has_density() && s.width() > 0)
    {
        double weighted = 0;
        double total = 0;
        bool finite = true;
        for (std::size_t i = 1; i < ends.size(); ++i)
        {
            double const lo = ends[i - 1];
            double const hi = ends[i];
            if (!(hi - lo > tol))
                continue;
            double const sup = dist.density_sup(lo, hi);
            finite = finite && std::isfinite(sup);
            weighted += sup * (std::abs(hi) + std::abs(lo));
            total += sup;
        }
        if (finite)
        {
            double const nn = static_cast<double>(n);
            RefinedRateBound refined;
            refined.alpha = s.width() * (1 + weighted);
            refined.beta = s.width() * s.width() * total;
            refined.value = refined.alpha / nn + refined.beta / (nn * nn);
            result.refined = refined;
        }
    }
    return result;
}

//---------------------------------------------------------------------------//
/*!
 * Tail part of the L1 gap: max of the integrals over (0, delta) and
 * (1 - delta, 1).
 */
inline double tail_defect(Distribution const& dist, StepQuantile const& sq,
                          double delta)
{
    if (!(delta > 0 && delta < 0.5))
    {
        throw DomainError("tail width must lie in (0, 1/2)");
    }
    return std::max(detail::abs_gap_integral(dist, sq, 0, delta),
                    detail::abs_gap_integral(dist, sq, 1 - delta, 1));
}

//! Tail defect between two laws, e.g. a truncation and its source.
inline double tail_defect(Distribution const& dist, Distribution const& approx,
                          double delta)
{
    if (!(delta > 0 && delta < 0.5))
    {
        throw DomainError("tail width must lie in (0, 1/2)");
    }
    return std::max(detail::abs_gap_integral(dist, approx, 0, delta),
                    detail::abs_gap_integral(dist, approx, 1 - delta, 1));
}

}  // namespace mudk
