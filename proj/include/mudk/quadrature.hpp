// SPDX-License-Identifier: Apache-2.0
//! \file mudk/quadrature.hpp
#pragma once

#include <cmath>
#include <limits>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace mudk
{
namespace detail
{
template<class F>
double simpson_step(F const& f, double a, double fa, double b, double fb,
                    double m, double fm, double whole, double tol, int depth)
{
    double const lm = 0.5 * (a + m);
    double const rm = 0.5 * (m + b);
    double const flm = f(lm);
    double const frm = f(rm);
    double const left = (m - a) / 6 * (fa + 4 * flm + fm);
    double const right = (b - m) / 6 * (fm + 4 * frm + fb);
    double const delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15 * tol)
    {
        return left + right + delta / 15;
    }
    return simpson_step(f, a, fa, m, fm, lm, flm, left, tol / 2, depth - 1)
           + simpson_step(f, m, fm, b, fb, rm, frm, right, tol / 2, depth - 1);
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Adaptive Simpson quadrature of a bounded integrand on [a, b].
 *
 * The integrand is evaluated at both endpoints, so it must be finite there.
 * The absolute tolerance is split between halves at each refinement.
 */
template<class F>
double integrate_simpson(F const& f, double a, double b, double tol,
                         int max_depth = 48)
{
    if (!(b > a))
    {
        return 0;
    }
    double const fa = f(a);
    double const fb = f(b);
    double const m = 0.5 * (a + b);
    double const fm = f(m);
    double const whole = (b - a) / 6 * (fa + 4 * fm + fb);
    return detail::simpson_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

//! Double-exponential quadrature for integrands singular at an endpoint.
template<class F>
double integrate_endpoint_singular(F const& f, double a, double b, double tol)
{
    if (!(b > a))
    {
        return 0;
    }
    static thread_local boost::math::quadrature::tanh_sinh<double> rule;
    auto guarded = [&](double x) {
        if (!(x > a) || !(x < b))
        {
            return 0.0;
        }
        return f(x);
    };
    return rule.integrate(guarded, a, b, tol);
}

}  // namespace mudk
