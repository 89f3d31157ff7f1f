// SPDX-License-Identifier: Apache-2.0
//! \file mudk/config.hpp
//! Distribution specs and run configuration from JSON.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "distributions.hpp"
#include "errors.hpp"

namespace mudk
{
using Json = nlohmann::json;

inline constexpr char const* version_string = "0.1.0";

namespace detail
{
inline Json const& require(Json const& j, char const* key,
                           std::string const& where)
{
    if (!j.is_object() || !j.contains(key))
    {
        throw ConfigError(where + ": missing field \"" + key + "\"");
    }
    return j.at(key);
}

inline double real_field(Json const& j, char const* key,
                         std::string const& where)
{
    auto const& v = require(j, key, where);
    if (!v.is_number())
    {
        throw ConfigError(where + ": field \"" + key + "\" must be a number");
    }
    return v.get<double>();
}

inline double real_field_or(Json const& j, char const* key, double fallback,
                            std::string const& where)
{
    if (!j.contains(key))
        return fallback;
    return real_field(j, key, where);
}

inline std::pair<double, double> pair_field(Json const& v,
                                            std::string const& where)
{
    if (!v.is_array() || v.size() != 2 || !v[0].is_number()
        || !v[1].is_number())
    {
        throw ConfigError(where + " must be a pair of numbers");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

inline Distribution parse_family(Json const& j, std::string const& where)
{
    if (!j.is_object())
    {
        throw ConfigError(where + ": distribution must be a JSON object");
    }
    auto const& fam = require(j, "family", where);
    if (!fam.is_string())
    {
        throw ConfigError(where + ": field \"family\" must be a string");
    }
    std::string const family = fam.get<std::string>();
    if (family == "uniform")
    {
        return Distribution::uniform(real_field(j, "a", where),
                                     real_field(j, "b", where));
    }
    if (family == "beta")
    {
        return Distribution::beta(real_field(j, "alpha", where),
                                  real_field(j, "beta", where));
    }
    if (family == "exponential")
    {
        return Distribution::exponential(real_field_or(j, "rate", 1, where));
    }
    if (family == "truncated-normal")
    {
        double const inf = std::numeric_limits<double>::infinity();
        return Distribution::truncated_normal(
            real_field_or(j, "mean", 0, where), real_field_or(j, "sd", 1, where),
            real_field_or(j, "lo", -inf, where),
            real_field_or(j, "hi", inf, where));
    }
    if (family == "two-piece-uniform")
    {
        auto const& iv = require(j, "intervals", where);
        if (!iv.is_array() || iv.size() != 2)
        {
            throw ConfigError(where
                              + ": field \"intervals\" must hold two pairs");
        }
        auto const [a1, b1] = pair_field(iv[0], where + ".intervals[0]");
        auto const [a2, b2] = pair_field(iv[1], where + ".intervals[1]");
        std::optional<double> w1;
        if (j.contains("weights"))
        {
            auto const [p1, p2] = pair_field(j.at("weights"), where + ".weights");
            if (!(p1 > 0 && p2 > 0))
                throw ConfigError(where + ": weights must be positive");
            w1 = p1 / (p1 + p2);
        }
        return Distribution::two_piece_uniform(a1, b1, a2, b2, w1);
    }
    if (family == "discrete")
    {
        auto const& atoms = require(j, "atoms", where);
        if (!atoms.is_array() || atoms.empty())
        {
            throw ConfigError(where + ": field \"atoms\" must be a nonempty "
                                      "list of [x, p] pairs");
        }
        std::vector<Atom> out;
        for (std::size_t i = 0; i < atoms.size(); ++i)
        {
            auto const [x, p] = pair_field(
                atoms[i], where + ".atoms[" + std::to_string(i) + "]");
            out.push_back({x, p});
        }
        return Distribution::discrete(std::move(out));
    }
    if (family == "mixture")
    {
        auto const& comps = require(j, "components", where);
        if (!comps.is_array() || comps.empty())
        {
            throw ConfigError(where
                              + ": field \"components\" must be a nonempty list");
        }
        std::vector<std::pair<double, Distribution>> parts;
        for (std::size_t i = 0; i < comps.size(); ++i)
        {
            std::string const sub = where + ".components[" + std::to_string(i)
                                    + "]";
            parts.emplace_back(real_field(comps[i], "weight", sub),
                               parse_family(require(comps[i], "dist", sub),
                                            sub + ".dist"));
        }
        return Distribution::mixture(std::move(parts));
    }
    throw ConfigError(where + ": unknown family \"" + family + "\"");
}
}  // namespace detail

//! Law described by a spec, before centering and truncation.
inline Distribution parse_distribution(Json const& j,
                                       std::string const& where = "dist")
{
    try
    {
        return detail::parse_family(j, where);
    }
    catch (DomainError const& e)
    {
        throw ConfigError(where + ": " + e.what());
    }
}

//---------------------------------------------------------------------------//
/*!
 * Law ready for discretization: centered if requested, then truncated.
 *
 * Unbounded laws without an explicit radius are truncated at |mean| + 6 sd.
 */
inline Distribution prepare_distribution(Json const& j,
                                         std::string const& where = "dist")
{
    Distribution d = parse_distribution(j, where);
    try
    {
        if (j.contains("center"))
        {
            if (!j.at("center").is_boolean())
                throw ConfigError(where + ": field \"center\" must be a boolean");
            if (j.at("center").get<bool>())
                d = d.center();
        }
        if (j.contains("truncate"))
        {
            d = d.truncate(detail::real_field(j, "truncate", where));
        }
        else if (!d.support().bounded())
        {
            d = d.truncate(std::abs(d.mean()) + 6 * std::sqrt(d.variance()));
        }
    }
    catch (DomainError const& e)
    {
        throw ConfigError(where + ": " + e.what());
    }
    return d;
}

//! Inline JSON if the text starts with '{', otherwise a file path.
inline Json load_json(std::string const& text_or_path)
{
    std::string text = text_or_path;
    auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{')
    {
        std::ifstream is(text_or_path);
        if (!is)
            throw IoError(text_or_path, "cannot open for reading");
        std::stringstream ss;
        ss << is.rdbuf();
        text = ss.str();
    }
    try
    {
        return Json::parse(text);
    }
    catch (Json::parse_error const& e)
    {
        throw ConfigError("invalid JSON in " + text_or_path.substr(0, 60)
                          + ": " + e.what());
    }
}

//---------------------------------------------------------------------------//
struct RunConfig
{
    Json dist;
    std::size_t n = 200;
    std::vector<std::size_t> n_list{5, 15, 30, 200};
    std::string scheme = "cdf";
    std::size_t points = 2048;
    std::size_t coeffs = 0;  //!< 0 selects max(256, 8n)
    std::string out;
    std::string svg;
    std::string boundary;
    std::string samples;
    std::string summary;
    std::size_t walks = 10'000;
    double step = 1e-4;
    std::uint64_t seed = 0;
    std::size_t threads = 0;
    std::uint64_t max_steps = 10'000'000;

    Json to_json() const
    {
        return Json{{"dist", dist},       {"n", n},
                    {"n_list", n_list},   {"scheme", scheme},
                    {"points", points},   {"coeffs", coeffs},
                    {"out", out},         {"svg", svg},
                    {"boundary", boundary}, {"samples", samples},
                    {"summary", summary}, {"walks", walks},
                    {"step", step},       {"seed", seed},
                    {"max_steps", max_steps}};
    }

    void validate() const
    {
        if (dist.is_null())
            throw ConfigError("dist: no distribution given");
        if (n == 0)
            throw ConfigError("n: must be at least 1");
        if (scheme != "cdf" && scheme != "pdf")
            throw ConfigError("scheme: expected \"cdf\" or \"pdf\", got \""
                              + scheme + "\"");
        if (points == 0)
            throw ConfigError("points: must be at least 1");
        if (!(step > 0) || !std::isfinite(step))
            throw ConfigError("step: must be positive");
        if (max_steps == 0)
            throw ConfigError("max_steps: must be positive");
        for (auto v : n_list)
        {
            if (v == 0)
                throw ConfigError("n_list: entries must be at least 1");
        }
    }
};

namespace detail
{
template<class T>
T count_field(Json const& j, char const* key)
{
    auto const& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
    {
        throw ConfigError(std::string(key) + ": must be a non-negative integer");
    }
    return v.get<T>();
}

inline std::string string_field(Json const& j, char const* key)
{
    auto const& v = j.at(key);
    if (!v.is_string())
        throw ConfigError(std::string(key) + ": must be a string");
    return v.get<std::string>();
}
}  // namespace detail

//! Settings from a config document; absent keys keep their defaults.
inline RunConfig config_from_json(Json const& j)
{
    if (!j.is_object())
        throw ConfigError("config: top level must be a JSON object");
    RunConfig c;
    static char const* const known[]
        = {"dist",    "n",       "n_list", "scheme", "points",
           "coeffs",  "out",     "svg",    "boundary", "samples",
           "summary", "walks",   "step",   "seed",   "threads",
           "max_steps"};
    for (auto const& [key, value] : j.items())
    {
        if (std::find(std::begin(known), std::end(known), key) == std::end(known))
            throw ConfigError("config: unknown field \"" + key + "\"");
    }
    using detail::count_field;
    using detail::string_field;
    if (j.contains("dist"))
    {
        c.dist = j.at("dist").is_string()
                     ? load_json(j.at("dist").get<std::string>())
                     : j.at("dist");
    }
    if (j.contains("n"))
        c.n = count_field<std::size_t>(j, "n");
    if (j.contains("n_list"))
    {
        auto const& v = j.at("n_list");
        if (!v.is_array())
            throw ConfigError("n_list: must be a list of integers");
        c.n_list.clear();
        for (auto const& e : v)
        {
            if (!e.is_number_integer() || e.get<long long>() <= 0)
                throw ConfigError("n_list: entries must be positive integers");
            c.n_list.push_back(e.get<std::size_t>());
        }
    }
    if (j.contains("scheme"))
        c.scheme = string_field(j, "scheme");
    if (j.contains("points"))
        c.points = count_field<std::size_t>(j, "points");
    if (j.contains("coeffs"))
        c.coeffs = count_field<std::size_t>(j, "coeffs");
    for (auto [key, field] :
         {std::pair{"out", &c.out}, std::pair{"svg", &c.svg},
          std::pair{"boundary", &c.boundary}, std::pair{"samples", &c.samples},
          std::pair{"summary", &c.summary}})
    {
        if (j.contains(key))
            *field = string_field(j, key);
    }
    if (j.contains("walks"))
        c.walks = count_field<std::size_t>(j, "walks");
    if (j.contains("step"))
        c.step = detail::real_field(j, "step", "config");
    if (j.contains("seed"))
        c.seed = count_field<std::uint64_t>(j, "seed");
    if (j.contains("threads"))
        c.threads = count_field<std::size_t>(j, "threads");
    if (j.contains("max_steps"))
        c.max_steps = count_field<std::uint64_t>(j, "max_steps");
    return c;
}

//! 64-bit FNV-1a of a byte string.
inline std::uint64_t fnv1a64(std::string const& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes)
    {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

//! Hash of the canonical serialization of the config.
inline std::string config_hash(RunConfig const& c)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(c.to_json().dump())));
    return buf;
}

inline std::string version_header(RunConfig const& c)
{
    return std::string("mu-domain-kit v") + version_string + ", config hash "
           + config_hash(c);
}

}  // namespace mudk
