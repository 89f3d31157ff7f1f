// SPDX-License-Identifier: Apache-2.0
//! \file mudk/cli.hpp
//! Subcommands of the mudk tool.
#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "boundary.hpp"
#include "config.hpp"
#include "discretize.hpp"
#include "errors.hpp"
#include "gross_map.hpp"
#include "verify_mc.hpp"

namespace mudk
{
namespace exit_code
{
inline constexpr int ok = 0;
inline constexpr int config = 2;
inline constexpr int numerical = 3;
inline constexpr int io = 4;
}  // namespace exit_code

namespace detail
{
inline StepQuantile build_measure(Distribution const& law, std::size_t n,
                                  std::string const& scheme)
{
    return scheme == "pdf" ? build_measure_pdf(law, n)
                           : build_measure_cdf(law, n);
}

inline std::string or_default(std::string const& path, char const* fallback)
{
    return path.empty() ? std::string(fallback) : path;
}

//! Write text to path, or to os when path is "-".
inline void write_text(std::string const& path, std::string const& text,
                       std::ostream& os)
{
    if (path == "-")
    {
        os << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError(path, "cannot open for writing");
    f << text;
    if (!f.flush())
        throw IoError(path, "write failed");
}

inline std::vector<double> read_samples_csv(std::string const& path)
{
    std::ifstream is(path);
    if (!is)
        throw IoError(path, "cannot open for reading");
    std::vector<double> out;
    std::string line;
    bool header = false;
    while (std::getline(is, line))
    {
        if (line.empty() || line[0] == '#')
            continue;
        if (!header)
        {
            if (line.rfind("walk,x_exit", 0) != 0)
                throw IoError(path, "expected header walk,x_exit");
            header = true;
            continue;
        }
        auto const comma = line.find(',');
        if (comma == std::string::npos)
            throw IoError(path, "malformed row: " + line);
        try
        {
            out.push_back(std::stod(line.substr(comma + 1)));
        }
        catch (std::exception const&)
        {
            throw IoError(path, "malformed row: " + line);
        }
    }
    if (!header)
        throw IoError(path, "missing header walk,x_exit");
    return out;
}
}  // namespace detail

//---------------------------------------------------------------------------//
//! Boundary of the configured law, in its own coordinates.
inline BoundaryPolyline build_boundary(RunConfig const& c)
{
    c.validate();
    Distribution const law = prepare_distribution(c.dist);
    auto const norm = normalize_support(law);
    auto const sq = detail::build_measure(norm.law, c.n, c.scheme);
    auto bp = scale_domain(boundary_points(sq, c.points), norm.alpha, norm.beta);
    bp.shift = law.mean_shift();
    return bp;
}

inline BoundaryPolyline cmd_build(RunConfig const& c, std::ostream& os)
{
    auto const bp = build_boundary(c);
    std::ostringstream csv;
    write_boundary_csv(bp, csv, {version_header(c)});
    std::string const out = detail::or_default(c.out, "boundary.csv");
    detail::write_text(out, csv.str(), os);
    if (!c.svg.empty())
        write_boundary_svg(bp, c.svg);
    return bp;
}

struct RateRow
{
    std::size_t n;
    double l1;
    double bound;
    double varpi;
};

inline std::vector<RateRow> cmd_rates(RunConfig const& c, std::ostream& os)
{
    c.validate();
    if (c.n_list.empty())
        throw ConfigError("n_list: must not be empty");
    Distribution const law = prepare_distribution(c.dist);
    std::vector<RateRow> rows;
    std::ostringstream csv;
    csv << "# " << version_header(c) << "\nn,l1,bound,varpi\n";
    for (auto n : c.n_list)
    {
        auto const sq = detail::build_measure(law, n, c.scheme);
        auto const rb = rate_bound(law, n);
        RateRow const row{n, l1_distance(law, sq), rb.bound, rb.varpi};
        rows.push_back(row);
        csv << n << ',' << format_real(row.l1) << ',' << format_real(row.bound)
            << ',' << format_real(row.varpi) << '\n';
    }
    detail::write_text(detail::or_default(c.out, "rates.csv"), csv.str(), os);
    return rows;
}

inline FourierCoefficients cmd_map(RunConfig const& c, std::ostream& os)
{
    c.validate();
    Distribution const law = prepare_distribution(c.dist);
    auto const sq = detail::build_measure(law, c.n, c.scheme);
    std::size_t const N = c.coeffs > 0 ? c.coeffs : default_coefficient_count(c.n);
    auto const fc = fourier_coefficients(sq, N);
    std::ostringstream csv;
    csv << "# " << version_header(c) << "\nk,a_k\n";
    for (std::size_t k = 1; k <= fc.size(); ++k)
        csv << k << ',' << format_real(fc.a(k)) << '\n';
    detail::write_text(detail::or_default(c.out, "map.csv"), csv.str(), os);
    return fc;
}

inline Json sample_summary(ExitSampleSet const& r, Distribution const& law)
{
    auto const s = summarize(r.samples);
    Json j{{"walks", r.walks},
           {"truncated", r.truncated_walks},
           {"ks", r.samples.empty() ? 1.0 : ks_distance(r.samples, law)},
           {"mean", s.mean},
           {"std", s.std},
           {"seed", r.seed},
           {"step", r.step}};
    return j;
}

inline ExitSampleSet cmd_simulate(RunConfig const& c, std::ostream& os,
                                  std::ostream& err)
{
    c.validate();
    if (c.walks == 0)
        throw ConfigError("walks: must be at least 1");
    Distribution const law = prepare_distribution(c.dist);
    BoundaryPolyline const bp = c.boundary.empty()
                                    ? build_boundary(c)
                                    : read_boundary_csv(c.boundary);
    SimulationOptions opt;
    opt.walks = c.walks;
    opt.step = c.step;
    opt.seed = c.seed;
    opt.max_steps = c.max_steps;
    opt.threads = c.threads;
    auto const r = simulate_exit(bp, opt);
    if (r.truncation_warning())
    {
        err << "warning: " << r.truncated_walks << " of " << r.walks
            << " walks hit the step cap\n";
    }

    std::ostringstream csv;
    csv << "# " << version_header(c) << "\nwalk,x_exit\n";
    for (std::size_t i = 0; i < r.samples.size(); ++i)
        csv << r.walk_index[i] << ',' << format_real(r.samples[i]) << '\n';
    detail::write_text(detail::or_default(c.out, "samples.csv"), csv.str(), os);
    detail::write_text(detail::or_default(c.summary, "summary.json"),
                       sample_summary(r, law).dump(2) + "\n", os);
    return r;
}

inline double cmd_check(RunConfig const& c, std::ostream& os)
{
    if (c.dist.is_null())
        throw ConfigError("dist: no distribution given");
    if (c.samples.empty())
        throw ConfigError("samples: no sample file given");
    Distribution const law = prepare_distribution(c.dist);
    auto const xs = detail::read_samples_csv(c.samples);
    if (xs.empty())
        throw ConfigError("samples: file holds no samples");
    double const ks = ks_distance(xs, law);
    auto const s = summarize(xs);
    Json const j{{"samples", xs.size()}, {"ks", ks}, {"mean", s.mean},
                 {"std", s.std}};
    detail::write_text(c.summary.empty() ? "-" : c.summary, j.dump(2) + "\n",
                       os);
    return ks;
}

//---------------------------------------------------------------------------//
//! Parse arguments, run one subcommand and map failures to exit codes.
inline int run_cli(std::vector<std::string> args, std::ostream& os,
                   std::ostream& err)
{
    CLI::App app{"Build, check and simulate domains whose Brownian exit "
                 "abscissa follows a given law",
                 "mudk"};
    app.set_version_flag("--version", std::string(version_string));
    app.require_subcommand(1);

    std::string config_path, dist, n_list, scheme, out, svg, boundary, samples,
        summary;
    std::size_t n = 0, points = 0, coeffs = 0, walks = 0, threads = 0;
    double step = 0;
    std::uint64_t seed = 0, max_steps = 0;

    auto* o_config = app.add_option("--config", config_path, "JSON run config");
    auto* o_dist = app.add_option("--dist", dist,
                                  "Distribution spec: file or inline JSON");
    auto* o_n = app.add_option("--n", n, "Grid size");
    auto* o_nlist = app.add_option("--n-list", n_list,
                                   "Comma-separated grid sizes for rates");
    auto* o_scheme = app.add_option("--scheme", scheme, "cdf or pdf");
    auto* o_points = app.add_option("--points", points,
                                    "Boundary samples per half");
    auto* o_coeffs = app.add_option("--coeffs", coeffs, "Series length");
    auto* o_out = app.add_option("--out", out, "Primary output file, - for stdout");
    auto* o_svg = app.add_option("--svg", svg, "SVG output for build");
    auto* o_walks = app.add_option("--walks", walks, "Number of walks");
    auto* o_step = app.add_option("--step", step, "Time step");
    auto* o_seed = app.add_option("--seed", seed, "Random seed");
    auto* o_boundary = app.add_option("--boundary", boundary,
                                      "Boundary CSV for simulate");
    auto* o_samples = app.add_option("--samples", samples,
                                     "Sample CSV for check");
    auto* o_summary = app.add_option("--summary", summary, "Summary JSON path");
    auto* o_threads = app.add_option("--threads", threads, "Worker cap");
    auto* o_max_steps = app.add_option("--max-steps", max_steps,
                                       "Step cap per walk");

    auto* s_build = app.add_subcommand("build", "Boundary CSV and optional SVG");
    auto* s_rates = app.add_subcommand("rates", "L1 gaps and bounds over n");
    auto* s_map = app.add_subcommand("map", "Series coefficients");
    auto* s_sim = app.add_subcommand("simulate", "Brownian exit samples");
    auto* s_check = app.add_subcommand("check", "KS distance of samples");
    for (auto* s : {s_build, s_rates, s_map, s_sim, s_check})
        s->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try
    {
        app.parse(reversed);
    }
    catch (CLI::CallForHelp const& e)
    {
        os << app.help();
        return exit_code::ok;
    }
    catch (CLI::CallForVersion const&)
    {
        os << version_string << '\n';
        return exit_code::ok;
    }
    catch (CLI::ParseError const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_code::config;
    }

    try
    {
        RunConfig c;
        if (o_config->count())
            c = config_from_json(load_json(config_path));
        if (o_dist->count())
            c.dist = load_json(dist);
        if (o_n->count())
            c.n = n;
        if (o_nlist->count())
        {
            c.n_list.clear();
            std::stringstream ss(n_list);
            std::string item;
            while (std::getline(ss, item, ','))
            {
                try
                {
                    std::size_t pos = 0;
                    long long const v = std::stoll(item, &pos);
                    if (pos != item.size() || v <= 0)
                        throw std::invalid_argument(item);
                    c.n_list.push_back(static_cast<std::size_t>(v));
                }
                catch (std::exception const&)
                {
                    throw ConfigError("n_list: bad entry \"" + item + "\"");
                }
            }
        }
        if (o_scheme->count())
            c.scheme = scheme;
        if (o_points->count())
            c.points = points;
        if (o_coeffs->count())
            c.coeffs = coeffs;
        if (o_out->count())
            c.out = out;
        if (o_svg->count())
            c.svg = svg;
        if (o_walks->count())
            c.walks = walks;
        if (o_step->count())
            c.step = step;
        if (o_seed->count())
            c.seed = seed;
        if (o_boundary->count())
            c.boundary = boundary;
        if (o_samples->count())
            c.samples = samples;
        if (o_summary->count())
            c.summary = summary;
        if (o_threads->count())
            c.threads = threads;
        if (o_max_steps->count())
            c.max_steps = max_steps;

        if (s_build->parsed())
            cmd_build(c, os);
        else if (s_rates->parsed())
            cmd_rates(c, os);
        else if (s_map->parsed())
            cmd_map(c, os);
        else if (s_sim->parsed())
            cmd_simulate(c, os, err);
        else if (s_check->parsed())
            cmd_check(c, os);
        return exit_code::ok;
    }
    catch (ConfigError const& e)
    {
        err << "config error: " << e.what() << '\n';
        return exit_code::config;
    }
    catch (DomainError const& e)
    {
        err << "config error: " << e.what() << '\n';
        return exit_code::config;
    }
    catch (NumericalError const& e)
    {
        err << "numerical error: " << e.what() << '\n';
        return exit_code::numerical;
    }
    catch (IoError const& e)
    {
        err << "i/o error: " << e.what() << '\n';
        return exit_code::io;
    }
}

inline int run_cli(int argc, char const* const* argv, std::ostream& os,
                   std::ostream& err)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i)
        args.emplace_back(argv[i]);
    return run_cli(std::move(args), os, err);
}

}  // namespace mudk
