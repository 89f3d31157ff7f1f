#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "mudk/boundary.hpp"
#include "mudk/discretize.hpp"
#include "mudk/domain_polygon.hpp"

using mudk::Distribution;

namespace
{
std::filesystem::path output_dir()
{
    std::filesystem::path p(MUDK_TEST_OUTPUT_DIR);
    std::filesystem::create_directories(p);
    return p;
}

mudk::BoundaryPolyline boundary_of(Distribution const& d, std::size_t n,
                                   std::size_t M = 2048)
{
    return mudk::boundary_points(mudk::build_measure_cdf(d, n), M);
}
}  // namespace

TEST(BoundaryPoints, ZeroFunction)
{
    auto bp = mudk::boundary_points(mudk::StepQuantile({0, 1}, {0.0}), 16);
    ASSERT_EQ(bp.size(), 32u);
    for (auto const& p : bp.points)
    {
        EXPECT_EQ(p.x, 0);
        EXPECT_EQ(p.y, 0);
    }
    EXPECT_THROW(mudk::boundary_points(mudk::StepQuantile({0, 1}, {0.0}), 0),
                 mudk::DomainError);
}

TEST(BoundaryPoints, MirroredAndOrdered)
{
    auto bp = boundary_of(Distribution::beta(2, 5).center(), 30, 256);
    ASSERT_EQ(bp.size() % 2, 0u);
    std::size_t const h = bp.size() / 2;
    for (std::size_t i = 0; i < h; ++i)
    {
        auto const& lo = bp.points[h - 1 - i];
        auto const& hi = bp.points[h + i];
        EXPECT_EQ(lo.t, -hi.t);
        EXPECT_EQ(lo.x, hi.x);
        EXPECT_EQ(lo.y, -hi.y);
    }
    for (std::size_t i = 1; i < bp.size(); ++i)
        EXPECT_LT(bp.points[i - 1].t, bp.points[i].t);
    EXPECT_GT(bp.points.front().t, -1);
    EXPECT_LT(bp.points.back().t, 1);
}

TEST(BoundaryPoints, UniformGridHasTwoMPoints)
{
    auto bp = boundary_of(Distribution::uniform(-1, 1), 200);
    EXPECT_EQ(bp.size(), 2 * 2048u);
    EXPECT_NEAR(bp.mesh, 0.01, 1e-15);
    EXPECT_NEAR(bp.points.back().x, 1, 1e-12);
    EXPECT_NEAR(bp.points[bp.size() / 2].x, -0.99, 1e-12);
}

TEST(BoundaryPoints, StepsMissedByGridAreSampled)
{
    mudk::StepQuantile sq({0, 0.5, 0.5001, 1}, {-1, 0, 1});
    auto bp = mudk::boundary_points(sq, 8);
    bool found = false;
    for (auto const& p : bp.points)
        found = found || p.x == 0;
    EXPECT_TRUE(found);
}

TEST(BoundaryPoints, StripForTwoPieceUniform)
{
    auto bp = boundary_of(Distribution::two_piece_uniform(-2, -1, 1, 2), 200);
    for (auto const& p : bp.points)
        EXPECT_FALSE(p.x > -0.98 && p.x < 0.98) << p.t << " " << p.x;
    EXPECT_TRUE(mudk::point_in_domain(bp, {0, 10 * bp.max_abs_y()}));
    EXPECT_TRUE(mudk::point_in_domain(bp, {0, -10 * bp.max_abs_y()}));
}

TEST(ScaleDomain, Examples)
{
    auto bp = boundary_of(Distribution::uniform(-1, 1), 30, 128);
    auto id = mudk::scale_domain(bp, 1, 0);
    for (std::size_t i = 0; i < bp.size(); ++i)
    {
        EXPECT_EQ(id.points[i].x, bp.points[i].x);
        EXPECT_EQ(id.points[i].y, bp.points[i].y);
    }
    auto shifted = mudk::scale_domain(bp, 1, 3);
    for (std::size_t i = 0; i < bp.size(); ++i)
    {
        EXPECT_EQ(shifted.points[i].x, bp.points[i].x + 3);
        EXPECT_EQ(shifted.points[i].y, bp.points[i].y);
    }
    EXPECT_EQ(shifted.beta, 3);
    EXPECT_THROW(mudk::scale_domain(bp, 0, 1), mudk::DomainError);

    auto twice = mudk::scale_domain(mudk::scale_domain(bp, 2, 1), 3, -1);
    EXPECT_EQ(twice.alpha, 6);
    EXPECT_EQ(twice.beta, 2);
    EXPECT_NEAR(twice.mesh, 6 * bp.mesh, 1e-15);
}

TEST(ScaleDomain, MatchesWiderLaw)
{
    auto small = boundary_of(Distribution::uniform(-1, 1), 200);
    auto wide = boundary_of(Distribution::uniform(-2, 2), 200);
    auto scaled = mudk::scale_domain(small, 2, 0);
    ASSERT_EQ(wide.size(), scaled.size());
    double worst = 0;
    for (std::size_t i = 0; i < wide.size(); ++i)
    {
        EXPECT_EQ(wide.points[i].t, scaled.points[i].t);
        worst = std::max({worst, std::abs(wide.points[i].x - scaled.points[i].x),
                          std::abs(wide.points[i].y - scaled.points[i].y)});
    }
    EXPECT_LT(worst, 1e-9);
}

TEST(NormalizeSupport, Examples)
{
    auto unit = mudk::normalize_support(Distribution::uniform(0, 1));
    EXPECT_EQ(unit.alpha, 1);
    EXPECT_EQ(unit.beta, 0);

    auto u = mudk::normalize_support(Distribution::uniform(-1, 1));
    EXPECT_EQ(u.alpha, 2);
    EXPECT_EQ(u.beta, -1);
    EXPECT_NEAR(u.law.support().a, 0, 1e-15);
    EXPECT_NEAR(u.law.support().b, 1, 1e-15);
    EXPECT_NEAR(u.law.cdf(0.3), 0.3, 1e-15);

    auto big = mudk::normalize_support(Distribution::uniform(-100, 100));
    EXPECT_EQ(big.alpha, 200);
    EXPECT_EQ(big.beta, -100);

    EXPECT_THROW(mudk::normalize_support(Distribution::exponential(1)),
                 mudk::UnboundedSupportError);
}

TEST(NormalizeSupport, RoundTripThroughScaling)
{
    auto d = Distribution::beta(2, 5).center();
    auto norm = mudk::normalize_support(d);
    auto direct = boundary_of(d, 30, 256);
    auto back = mudk::scale_domain(boundary_of(norm.law, 30, 256), norm.alpha,
                                   norm.beta);
    ASSERT_EQ(direct.size(), back.size());
    for (std::size_t i = 0; i < direct.size(); ++i)
    {
        EXPECT_NEAR(direct.points[i].x, back.points[i].x, 1e-12);
        EXPECT_NEAR(direct.points[i].y, back.points[i].y, 1e-12);
    }
}

TEST(Export, CsvRows)
{
    mudk::BoundaryPolyline bp;
    bp.points = {{-0.5, 0, -1}, {0.1, 1, 0}, {0.5, 0, 1}};
    std::ostringstream os;
    mudk::write_boundary_csv(bp, os);
    std::istringstream is(os.str());
    std::string line;
    int rows = -1;
    while (std::getline(is, line))
        ++rows;
    EXPECT_EQ(rows, 3);

    mudk::BoundaryPolyline empty;
    std::ostringstream e;
    mudk::write_boundary_csv(empty, e);
    EXPECT_EQ(e.str(), "t,x,y\n");
    std::ostringstream svg;
    EXPECT_THROW(mudk::write_boundary_svg(empty, svg), mudk::DomainError);
}

TEST(Export, CsvRoundTrip)
{
    auto bp = boundary_of(Distribution::two_piece_uniform(-2, -1, 1, 2), 15, 64);
    auto path = output_dir() / "roundtrip.csv";
    mudk::write_boundary_csv(bp, path.string(), {"roundtrip"});
    auto back = mudk::read_boundary_csv(path.string());
    ASSERT_EQ(back.size(), bp.size());
    EXPECT_EQ(back.mesh, bp.mesh);
    for (std::size_t i = 0; i < bp.size(); ++i)
    {
        EXPECT_EQ(back.points[i].t, bp.points[i].t);
        EXPECT_EQ(back.points[i].x, bp.points[i].x);
        EXPECT_EQ(back.points[i].y, bp.points[i].y);
    }
    EXPECT_THROW(mudk::read_boundary_csv((output_dir() / "absent.csv").string()),
                 mudk::IoError);
}

TEST(Export, SvgPathMatchesCsv)
{
    auto bp = boundary_of(Distribution::uniform(-1, 1), 5, 64);
    std::ostringstream os;
    mudk::write_boundary_svg(bp, os);
    std::string const svg = os.str();
    auto d0 = svg.find(" d=\"");
    ASSERT_NE(d0, std::string::npos);
    std::string const path = svg.substr(d0 + 4, svg.find('"', d0 + 4) - d0 - 4);
    EXPECT_EQ(path.front(), 'M');
    EXPECT_EQ(path.back(), 'Z');

    std::regex cmd("([ML])([-0-9.eE+]+) ([-0-9.eE+]+)");
    std::size_t i = 0;
    for (auto it = std::sregex_iterator(path.begin(), path.end(), cmd);
         it != std::sregex_iterator(); ++it, ++i)
    {
        ASSERT_LT(i, bp.size());
        EXPECT_EQ((*it)[1].str(), i == 0 ? "M" : "L");
        EXPECT_NEAR(std::stod((*it)[2].str()), bp.points[i].x, 1e-6);
        EXPECT_NEAR(std::stod((*it)[3].str()), bp.points[i].y, 1e-6);
    }
    EXPECT_EQ(i, bp.size());
}

TEST(Export, FigureGrid)
{
    struct Law
    {
        char const* name;
        Distribution dist;
    };
    Law const laws[] = {
        {"uniform", Distribution::uniform(-1, 1)},
        {"beta", Distribution::beta(2, 5).center()},
        {"two_piece", Distribution::two_piece_uniform(-2, -1, 1, 2)},
    };
    for (auto const& law : laws)
    {
        for (std::size_t n : {5u, 15u, 30u, 200u})
        {
            auto bp = boundary_of(law.dist, n);
            auto path = output_dir()
                        / (std::string(law.name) + "_n" + std::to_string(n) + ".svg");
            mudk::write_boundary_svg(bp, path.string());
            EXPECT_GT(std::filesystem::file_size(path), 1000u);
            EXPECT_TRUE(mudk::point_in_domain(bp, {0, 0}));
        }
    }
}

TEST(Boundary, CenteredBetaRange)
{
    auto bp = boundary_of(Distribution::beta(2, 5).center(), 200);
    for (auto const& p : bp.points)
    {
        EXPECT_GT(p.x, -2.0 / 7 - 1e-9);
        EXPECT_LT(p.x, 5.0 / 7 + 1e-9);
    }
}
