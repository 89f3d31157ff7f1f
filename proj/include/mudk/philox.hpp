// SPDX-License-Identifier: Apache-2.0
//! \file mudk/philox.hpp
//! Philox4x32-10 counter-based generator.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace mudk
{
class Philox4x32
{
  public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr std::uint32_t m0 = 0xD2511F53u;
    static constexpr std::uint32_t m1 = 0xCD9E8D57u;
    static constexpr std::uint32_t w0 = 0x9E3779B9u;
    static constexpr std::uint32_t w1 = 0xBB67AE85u;

    //! Ten-round bijection of the counter under the key.
    static constexpr Counter apply(Counter c, Key k)
    {
        for (int r = 0; r < 10; ++r)
        {
            if (r > 0)
            {
                k[0] += w0;
                k[1] += w1;
            }
            std::uint64_t const p0 = std::uint64_t{m0} * c[0];
            std::uint64_t const p1 = std::uint64_t{m1} * c[2];
            c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
                 static_cast<std::uint32_t>(p1),
                 static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
                 static_cast<std::uint32_t>(p0)};
        }
        return c;
    }

    static constexpr Key key_from(std::uint64_t seed)
    {
        return {static_cast<std::uint32_t>(seed),
                static_cast<std::uint32_t>(seed >> 32)};
    }

    //! Counter for draw `index` of stream `stream`.
    static constexpr Counter counter_from(std::uint64_t index,
                                          std::uint64_t stream)
    {
        return {static_cast<std::uint32_t>(index),
                static_cast<std::uint32_t>(index >> 32),
                static_cast<std::uint32_t>(stream),
                static_cast<std::uint32_t>(stream >> 32)};
    }
};

//! Uniform in (0, 1) with 52 random bits from two words.
inline double uniform_open(std::uint32_t hi, std::uint32_t lo)
{
    std::uint64_t const bits = (std::uint64_t{hi} << 20) | (lo >> 12);
    return (static_cast<double>(bits) + 0.5) * 0x1p-52;
}

//! Two independent standard normals from draw `index` of stream `stream`.
inline std::pair<double, double>
gaussian_pair(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
{
    auto const r = Philox4x32::apply(Philox4x32::counter_from(index, stream),
                                     Philox4x32::key_from(seed));
    double const u1 = uniform_open(r[0], r[1]);
    double const u2 = uniform_open(r[2], r[3]);
    double const radius = std::sqrt(-2 * std::log(u1));
    double const angle = 2 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace mudk
