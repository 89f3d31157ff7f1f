// SPDX-License-Identifier: Apache-2.0
//! \file mudk/hilbert.hpp
//! Periodic Hilbert transform of even step functions on the circle.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"
#include "step_quantile.hpp"

namespace mudk
{
//! One term value * 1_{lo < |theta| < hi} of an even step function.
struct AngularStep
{
    double lo;
    double hi;
    double value;
};

inline constexpr double pole_radius = 1e-9;

namespace detail
{
//! Representative of u in (-pi, pi].
inline double wrap_angle(double u)
{
    constexpr double two_pi = 2 * std::numbers::pi;
    double r = std::remainder(u, two_pi);
    if (r <= -std::numbers::pi)
        r += two_pi;
    return r;
}

//! ln |sin((u - s)/2) / sin((u + s)/2)| for u in (0, pi]; zero at s = 0, pi.
inline double log_sine_ratio(double u, double s)
{
    if (s <= 0 || s >= std::numbers::pi)
        return 0;
    return std::log(std::abs(std::sin(0.5 * (u - s)) / std::sin(0.5 * (u + s))));
}

inline bool near_pole(double u, double s)
{
    return s > 0 && s < std::numbers::pi && std::abs(u - s) < pole_radius;
}

inline void check_angles(double a, double b)
{
    if (!(a >= 0 && a < b && b <= std::numbers::pi))
    {
        throw DomainError("indicator angles need 0 <= a < b <= pi");
    }
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Hilbert transform of 1_{a < |x| < b} at angle u:
 *   (1/pi) ln | sin((u-a)/2) sin((u+b)/2) / (sin((u-b)/2) sin((u+a)/2)) |.
 *
 * Odd in u by construction. Throws PoleError within 1e-9 of +-a or +-b.
 */
inline double hilbert_indicator(double a, double b, double u)
{
    detail::check_angles(a, b);
    double const w = detail::wrap_angle(u);
    if (w < 0)
        return -hilbert_indicator(a, b, -w);
    if (w == 0)
        return 0;
    if (detail::near_pole(w, a) || detail::near_pole(w, b))
    {
        throw PoleError("Hilbert transform evaluated at a jump: u = "
                        + std::to_string(u));
    }
    return (detail::log_sine_ratio(w, a) - detail::log_sine_ratio(w, b))
           / std::numbers::pi;
}

//! Angular terms of theta -> q_n(|theta| / pi) on (0, 1) levels.
inline std::vector<AngularStep> angular_steps(StepQuantile const& sq)
{
    auto const unit = sq.unit_restricted();
    auto const bp = unit.breakpoints();
    auto const vals = unit.values();
    std::vector<AngularStep> out;
    out.reserve(vals.size());
    for (std::size_t j = 0; j < vals.size(); ++j)
    {
        if (bp[j + 1] > bp[j])
        {
            out.push_back({std::numbers::pi * bp[j],
                           std::numbers::pi * bp[j + 1], vals[j]});
        }
    }
    return out;
}

//---------------------------------------------------------------------------//
/*!
 * Hilbert transform of theta -> q_n(|theta| / pi) at angle u.
 *
 * Summed by parts over the jumps: (1/pi) sum_j (x_{j+1} - x_j) g(theta_j)
 * with g(s) = ln |sin((u-s)/2) / sin((u+s)/2)|, which equals the sum of the
 * indicator transforms weighted by the step values. Throws PoleError within
 * 1e-9 of a jump.
 */
inline double hilbert_step_quantile(StepQuantile const& sq, double u)
{
    double const w = detail::wrap_angle(u);
    if (w < 0)
        return -hilbert_step_quantile(sq, -w);
    if (w == 0)
        return 0;
    auto const unit = sq.unit_restricted();
    auto const bp = unit.breakpoints();
    auto const vals = unit.values();
    double total = 0;
    for (std::size_t j = 1; j < vals.size(); ++j)
    {
        double const jump = vals[j] - vals[j - 1];
        if (jump == 0)
            continue;
        double const s = std::numbers::pi * bp[j];
        if (detail::near_pole(w, s))
        {
            throw PoleError("Hilbert transform evaluated at a jump: u = "
                            + std::to_string(u));
        }
        total += jump * detail::log_sine_ratio(w, s);
    }
    return total / std::numbers::pi;
}

//---------------------------------------------------------------------------//
// PRINCIPAL-VALUE ORACLE
//---------------------------------------------------------------------------//
namespace detail
{
inline double even_step_value(std::span<AngularStep const> f, double theta)
{
    double const x = std::abs(wrap_angle(theta));
    double total = 0;
    for (auto const& s : f)
    {
        if (x > s.lo && x < s.hi)
            total += s.value;
    }
    return total;
}

//! (1/2pi) int_eta^pi [f(u - t) - f(u + t)] cot(t/2) dt.
inline double pv_truncated(std::span<AngularStep const> f, double u, double eta)
{
    constexpr double pi = std::numbers::pi;
    std::vector<double> cuts{eta, pi};
    for (auto const& s : f)
    {
        for (double edge : {s.lo, -s.lo, s.hi, -s.hi})
        {
            for (double t : {wrap_angle(u - edge), wrap_angle(edge - u)})
            {
                t = std::abs(t);
                if (t > eta && t < pi)
                    cuts.push_back(t);
            }
        }
    }
    std::sort(cuts.begin(), cuts.end());
    auto integrand = [&](double t) {
        return (even_step_value(f, u - t) - even_step_value(f, u + t))
               / std::tan(0.5 * t);
    };
    double total = 0;
    for (std::size_t i = 1; i < cuts.size(); ++i)
    {
        double const lo = cuts[i - 1];
        double const hi = cuts[i];
        if (!(hi - lo > 1e-15))
            continue;
        // Sample strictly inside so the step values are those of the piece.
        double const shrink = 1e-13 * (hi - lo);
        total += integrate_simpson(integrand, lo + shrink, hi - shrink, 1e-13);
    }
    return total / (2 * pi);
}
}  // namespace detail

/*!
 * Principal-value quadrature of the conjugate-function kernel.
 *
 * The symmetric exclusion |t| < eta is removed at eta, eta/10 and eta/100 and
 * the truncation error (linear in eta) is extrapolated away. Throws
 * OracleError when the two extrapolants disagree by more than 1e-4.
 */
inline double hilbert_pv_oracle(std::span<AngularStep const> f, double u,
                                double eta = 1e-2)
{
    if (!(eta > 0))
    {
        throw DomainError("exclusion radius must be positive");
    }
    double const i0 = detail::pv_truncated(f, u, eta);
    double const i1 = detail::pv_truncated(f, u, eta / 10);
    double const i2 = detail::pv_truncated(f, u, eta / 100);
    double const r1 = (10 * i1 - i0) / 9;
    double const r2 = (10 * i2 - i1) / 9;
    if (!(std::abs(r2 - r1) <= 1e-4))
    {
        throw OracleError("principal-value extrapolation did not settle: "
                          + std::to_string(r1) + " vs " + std::to_string(r2));
    }
    return r2;
}

}  // namespace mudk
