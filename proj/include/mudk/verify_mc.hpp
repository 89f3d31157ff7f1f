// SPDX-License-Identifier: Apache-2.0
//! \file mudk/verify_mc.hpp
//! Exit positions of planar Brownian motion from a boundary polygon.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "boundary.hpp"
#include "distributions.hpp"
#include "domain_polygon.hpp"
#include "errors.hpp"
#include "philox.hpp"

namespace mudk
{
inline constexpr std::uint64_t default_max_steps = 10'000'000;

struct ExitSampleSet
{
    std::vector<double> samples;          //!< Re(Z_tau), by walk index
    std::vector<std::size_t> walk_index;  //!< walk that produced samples[i]
    std::uint64_t seed = 0;
    double step = 0;
    std::size_t walks = 0;
    std::size_t truncated_walks = 0;

    //! More than 1% of walks hit the step cap.
    bool truncation_warning() const
    {
        return static_cast<double>(truncated_walks)
               > 0.01 * static_cast<double>(walks);
    }
};

struct SimulationOptions
{
    std::size_t walks = 10'000;
    double step = 1e-4;
    std::uint64_t seed = 0;
    std::uint64_t max_steps = default_max_steps;
    std::size_t threads = 0;  //!< 0: hardware concurrency capped by MUDK_THREADS
};

//! Worker count from the request, the hardware and MUDK_THREADS.
inline std::size_t worker_count(std::size_t requested = 0)
{
    std::size_t n = requested;
    if (n == 0)
        n = std::max(1u, std::thread::hardware_concurrency());
    if (char const* env = std::getenv("MUDK_THREADS"))
    {
        char* end = nullptr;
        long const cap = std::strtol(env, &end, 10);
        if (end != env && cap > 0)
            n = std::min(n, static_cast<std::size_t>(cap));
    }
    return std::max<std::size_t>(n, 1);
}

//! Abscissa where one walk first meets the boundary, or nothing if it hits
//! the step cap.
inline std::optional<double> simulate_walk(DomainPolygon const& domain,
                                           std::uint64_t seed,
                                           std::uint64_t walk, double step,
                                           std::uint64_t max_steps)
{
    double const s = std::sqrt(step);
    Point2 z{0, 0};
    for (std::uint64_t k = 0; k < max_steps; ++k)
    {
        auto const [g1, g2] = gaussian_pair(seed, walk, k);
        Point2 const next{z.x + s * g1, z.y + s * g2};
        if (auto hit = domain.first_crossing(z, next))
            return hit->x;
        z = next;
    }
    return std::nullopt;
}

//---------------------------------------------------------------------------//
/*!
 * Run independent Euler walks from the origin until they leave the domain.
 *
 * Walk w draws its Gaussians from Philox stream w under key seed, so results
 * do not depend on the number of workers.
 */
inline ExitSampleSet simulate_exit(DomainPolygon const& domain,
                                   SimulationOptions const& opt)
{
    if (opt.walks == 0)
        throw DomainError("need at least one walk");
    if (!(opt.step > 0) || !std::isfinite(opt.step))
        throw DomainError("step must be positive");
    if (opt.max_steps == 0)
        throw DomainError("max_steps must be positive");
    if (!domain.contains({0, 0}))
        throw DomainError("origin lies outside the domain");

    std::vector<std::optional<double>> exits(opt.walks);
    std::atomic<std::size_t> next{0};
    std::size_t constexpr chunk = 16;
    auto work = [&] {
        for (;;)
        {
            std::size_t const begin = next.fetch_add(chunk);
            if (begin >= opt.walks)
                return;
            std::size_t const end = std::min(begin + chunk, opt.walks);
            for (std::size_t w = begin; w < end; ++w)
            {
                exits[w] = simulate_walk(domain, opt.seed, w, opt.step,
                                         opt.max_steps);
            }
        }
    };

    std::size_t const workers = std::min(worker_count(opt.threads), opt.walks);
    if (workers <= 1)
    {
        work();
    }
    else
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t i = 0; i < workers; ++i)
            pool.emplace_back(work);
    }

    ExitSampleSet out;
    out.seed = opt.seed;
    out.step = opt.step;
    out.walks = opt.walks;
    for (std::size_t w = 0; w < opt.walks; ++w)
    {
        if (exits[w])
        {
            out.samples.push_back(*exits[w]);
            out.walk_index.push_back(w);
        }
        else
        {
            ++out.truncated_walks;
        }
    }
    return out;
}

inline ExitSampleSet simulate_exit(BoundaryPolyline const& bp,
                                   SimulationOptions const& opt)
{
    return simulate_exit(DomainPolygon(bp), opt);
}

//---------------------------------------------------------------------------//
//! Two-sided Kolmogorov-Smirnov statistic of samples against dist.
inline double ks_distance(std::span<double const> samples,
                          Distribution const& dist)
{
    if (samples.empty())
        throw DomainError("KS distance needs a nonempty sample");
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    double const m = static_cast<double>(x.size());
    double d = 0;
    std::size_t i = 0;
    while (i < x.size())
    {
        std::size_t j = i;
        while (j < x.size() && x[j] == x[i])
            ++j;
        double const below = static_cast<double>(i) / m;
        double const upto = static_cast<double>(j) / m;
        d = std::max({d, std::abs(upto - dist.cdf(x[i])),
                      std::abs(below - dist.cdf_left(x[i]))});
        i = j;
    }
    return d;
}

struct SampleSummary
{
    double mean = 0;
    double std = 0;
};

//! Mean and sample standard deviation.
inline SampleSummary summarize(std::span<double const> samples)
{
    SampleSummary s;
    if (samples.empty())
        return s;
    double const m = static_cast<double>(samples.size());
    for (double v : samples)
        s.mean += v;
    s.mean /= m;
    if (samples.size() > 1)
    {
        double ss = 0;
        for (double v : samples)
            ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / (m - 1));
    }
    return s;
}

}  // namespace mudk
