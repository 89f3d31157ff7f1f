// SPDX-License-Identifier: Apache-2.0
//! \file mudk/gross_map.hpp
//! Power series G_n(z) = sum_{k>=1} a_k z^k built from a step quantile.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "step_quantile.hpp"

namespace mudk
{
//! Cosine coefficients a_1..a_N of theta -> q_n(|theta| / pi).
struct FourierCoefficients
{
    std::vector<double> coeffs;  //!< coeffs[k - 1] = a_k
    double source_l1_norm = 0;   //!< int_0^1 |q_n(u)| du

    std::size_t size() const { return coeffs.size(); }
    double a(std::size_t k) const { return coeffs.at(k - 1); }
};

inline std::size_t default_coefficient_count(std::size_t n)
{
    return std::max<std::size_t>(256, 8 * n);
}

/*!
 * Exact coefficients
 *   a_k = (2 / (k pi)) sum_j x_j (sin(k pi sigma_j) - sin(k pi sigma_{j-1})).
 */
inline FourierCoefficients fourier_coefficients(StepQuantile const& sq,
                                                std::size_t N)
{
    if (N == 0)
    {
        throw DomainError("need at least one coefficient");
    }
    auto const unit = sq.unit_restricted();
    auto const bp = unit.breakpoints();
    auto const vals = unit.values();

    FourierCoefficients fc;
    fc.coeffs.resize(N);
    for (std::size_t j = 0; j < vals.size(); ++j)
    {
        fc.source_l1_norm += std::abs(vals[j]) * (bp[j + 1] - bp[j]);
    }
    for (std::size_t k = 1; k <= N; ++k)
    {
        double const kpi = static_cast<double>(k) * std::numbers::pi;
        double sum = 0;
        double prev = 0;
        for (std::size_t j = 0; j < vals.size(); ++j)
        {
            double const next = std::sin(kpi * bp[j + 1]);
            sum += vals[j] * (next - prev);
            prev = next;
        }
        fc.coeffs[k - 1] = 2 * sum / kpi;
    }
    return fc;
}

//! Horner evaluation of sum_{k=1}^N a_k z^k for |z| < 1.
inline std::complex<double>
evaluate_map(FourierCoefficients const& fc, std::complex<double> z)
{
    if (!(std::abs(z) <= 1 - 1e-9))
    {
        throw DomainError("map series evaluated outside the open unit disc");
    }
    std::complex<double> acc = 0;
    for (auto it = fc.coeffs.rbegin(); it != fc.coeffs.rend(); ++it)
    {
        acc = (acc + *it) * z;
    }
    return acc;
}

//! Guaranteed bound 2 * l1_gap * r / (1 - r) on sup_{|z|<=r} |G_n - G|.
inline double map_distance_bound(double l1_gap, double r)
{
    if (!(r > 0 && r < 1))
    {
        throw DomainError("radius must lie in (0, 1)");
    }
    if (!(l1_gap >= 0))
    {
        throw DomainError("L1 gap must be non-negative");
    }
    return 2 * l1_gap * r / (1 - r);
}

}  // namespace mudk
