#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "mudk/distributions.hpp"

using mudk::Atom;
using mudk::Distribution;

namespace
{
Distribution two_atoms()
{
    return Distribution::discrete({{-1, 0.5}, {1, 0.5}});
}

Distribution two_piece()
{
    return Distribution::two_piece_uniform(-2, -1, 1, 2);
}

std::vector<Distribution> zoo()
{
    return {Distribution::uniform(-1, 1),
            Distribution::beta(2, 5),
            Distribution::beta(0.5, 0.5),
            Distribution::exponential(1),
            Distribution::truncated_normal(0, 1, -2, 3),
            two_piece(),
            two_atoms(),
            Distribution::mixture({{0.5, Distribution::uniform(-1, 1)},
                                   {0.5, Distribution::discrete({{0, 1}})}}),
            Distribution::exponential(1).truncate(3)};
}
}  // namespace

TEST(Cdf, Examples)
{
    EXPECT_DOUBLE_EQ(Distribution::uniform(-1, 1).cdf(0), 0.5);
    EXPECT_DOUBLE_EQ(two_atoms().cdf(-1), 0.5);
    EXPECT_DOUBLE_EQ(two_atoms().cdf(0.99), 0.5);
    EXPECT_NEAR(Distribution::exponential(1).cdf(1), 0.6321205588285577, 1e-15);
}

TEST(Cdf, AtomJumpEqualsMass)
{
    auto d = Distribution::mixture({{0.25, Distribution::uniform(0, 1)},
                                    {0.75, Distribution::discrete({{0.5, 1}})}});
    EXPECT_NEAR(d.cdf(0.5) - d.cdf_left(0.5), 0.75, 1e-15);
    EXPECT_NEAR(d.mass_at(0.5), 0.75, 1e-15);
    ASSERT_EQ(d.atoms().size(), 1u);
    EXPECT_DOUBLE_EQ(d.atoms()[0].location, 0.5);
}

TEST(Cdf, MonotoneRightContinuousWithLimits)
{
    for (auto const& d : zoo())
    {
        auto s = d.support();
        double lo = s.bounded() ? s.a : -10;
        double hi = s.bounded() ? s.b : 30;
        EXPECT_EQ(d.cdf(lo - 1e-9), 0.0);
        EXPECT_EQ(d.cdf(hi + 1e-9 + (s.bounded() ? 0 : 1e3)), 1.0);
        double prev = 0;
        for (int i = 0; i <= 400; ++i)
        {
            double x = lo - 0.5 + (hi - lo + 1) * i / 400.0;
            double f = d.cdf(x);
            EXPECT_GE(f, prev - 1e-15);
            EXPECT_LE(d.cdf_left(x), f + 1e-15);
            prev = f;
        }
    }
}

TEST(Quantile, Examples)
{
    EXPECT_NEAR(Distribution::uniform(-1, 1).quantile(0.5), 0, 1e-15);
    auto e = Distribution::exponential(1);
    EXPECT_NEAR(e.quantile(1 - std::exp(-1.0)), 1, 1e-12);
    EXPECT_NEAR(e.quantile(0.3), -std::log(0.7), 1e-14);
    EXPECT_EQ(two_atoms().quantile(0.3), -1);
    EXPECT_EQ(two_atoms().quantile(0.7), 1);
}

TEST(Quantile, DomainErrors)
{
    auto d = Distribution::uniform(-1, 1);
    EXPECT_THROW(d.quantile(0), mudk::DomainError);
    EXPECT_THROW(d.quantile(1), mudk::DomainError);
    EXPECT_THROW(d.strict_quantile(-0.1), mudk::DomainError);
}

TEST(StrictQuantile, Examples)
{
    EXPECT_EQ(two_atoms().quantile(0.5), -1);
    EXPECT_EQ(two_atoms().strict_quantile(0.5), 1);
    auto u = Distribution::uniform(-1, 1);
    for (double v : {0.1, 0.37, 0.5, 0.9})
        EXPECT_NEAR(u.strict_quantile(v), u.quantile(v), 1e-12);
    auto tp = two_piece();
    EXPECT_NEAR(tp.quantile(0.5), -1, 1e-12);
    EXPECT_NEAR(tp.strict_quantile(0.5), 1, 1e-12);
}

TEST(Quantile, PseudoInverseProperties)
{
    std::vector<double> us, xs;
    for (int i = 1; i < 100; ++i)
        us.push_back(i / 100.0);
    us.push_back(0.5);
    for (int i = 0; i <= 120; ++i)
        xs.push_back(-3 + i * 0.05);
    xs.push_back(0);
    xs.push_back(-1);
    xs.push_back(1);

    for (auto const& d : zoo())
    {
        for (double u : us)
        {
            double q = d.quantile(u);
            double qp = d.strict_quantile(u);
            EXPECT_LE(q, qp + 1e-12);
            for (double x : xs)
            {
                double F = d.cdf(x);
                // (1) q+(u) < x implies u < F(x)
                if (qp < x - 1e-9)
                    EXPECT_LT(u, F + 1e-12);
                // (3) F(x) < u implies x <= q(u)
                if (F < u - 1e-12)
                    EXPECT_LE(x, q + 1e-9);
                // (4) x < q(u) implies F(x) < u
                if (x < q - 1e-9)
                    EXPECT_LT(F, u + 1e-12);
            }
        }
        for (double x : xs)
        {
            double F = d.cdf(x);
            // (2) q(F(x)) <= x
            if (F > 0 && F < 1)
                EXPECT_LE(d.quantile(F), x + 1e-9);
        }
        double prev = -INFINITY;
        for (double u : us)
        {
            if (u == 0.5)
                continue;
            EXPECT_GE(d.quantile(u), prev);
            prev = d.quantile(u);
        }
    }
}

TEST(Quantile, StrictDiffersOnlyOnPlateaus)
{
    auto tp = two_piece();
    int differ = 0;
    for (int i = 1; i < 1000; ++i)
    {
        double u = i / 1000.0;
        if (std::abs(tp.strict_quantile(u) - tp.quantile(u)) > 1e-9)
            ++differ;
    }
    EXPECT_EQ(differ, 1);
}

TEST(Sample, Examples)
{
    std::vector<double> half{0.5};
    EXPECT_NEAR(Distribution::uniform(-1, 1).sample(half).at(0), 0, 1e-15);
    EXPECT_NEAR(Distribution::exponential(1).sample(half).at(0), std::log(2.0),
                1e-14);
    EXPECT_TRUE(Distribution::uniform(0, 1).sample({}).empty());
    std::vector<double> bad{1.5};
    EXPECT_THROW(Distribution::uniform(0, 1).sample(bad), mudk::DomainError);
}

TEST(Center, Examples)
{
    auto u = Distribution::uniform(-1, 1).center();
    EXPECT_NEAR(u.mean_shift(), 0, 1e-15);
    EXPECT_NEAR(u.support().a, -1, 1e-15);

    auto b = Distribution::beta(2, 5).center();
    EXPECT_NEAR(b.mean_shift(), -2.0 / 7, 1e-14);
    EXPECT_NEAR(b.support().a, -2.0 / 7, 1e-14);
    EXPECT_NEAR(b.support().b, 5.0 / 7, 1e-14);
    EXPECT_LT(std::abs(b.mean()), 1e-9);

    auto d = Distribution::discrete({{0, 0.5}, {2, 0.5}}).center();
    auto atoms = d.atoms();
    ASSERT_EQ(atoms.size(), 2u);
    EXPECT_NEAR(atoms[0].location, -1, 1e-15);
    EXPECT_NEAR(atoms[1].location, 1, 1e-15);
}

TEST(Center, QuantileIntegratesToZero)
{
    for (auto const& d : zoo())
    {
        auto c = d.center();
        EXPECT_LT(std::abs(c.mean()), 1e-9) << mudk::to_string(d.family());
        // Midpoint rule on the quantile as an independent check.
        if (c.support().bounded())
        {
            double s = 0;
            int const m = 200000;
            for (int i = 0; i < m; ++i)
                s += c.quantile((i + 0.5) / m);
            EXPECT_LT(std::abs(s / m), 2e-5) << mudk::to_string(d.family());
        }
    }
}

TEST(Truncate, ExponentialAtomAndDensity)
{
    for (double n : {2.0, 4.0, 8.0})
    {
        auto t = Distribution::exponential(1).truncate(n);
        EXPECT_EQ(t.support().a, 0);
        EXPECT_EQ(t.support().b, n);
        ASSERT_EQ(t.atoms().size(), 1u);
        EXPECT_EQ(t.atoms()[0].location, 0);
        EXPECT_NEAR(t.atoms()[0].mass, std::exp(-n), 1e-15);
        EXPECT_NEAR(t.density(1.0), std::exp(-1.0), 1e-15);
        EXPECT_NEAR(t.cdf(1.0), std::exp(-n) + 1 - std::exp(-1.0), 1e-15);
    }
}

TEST(Truncate, ThreeCaseQuantile)
{
    double const n = 3;
    auto t = Distribution::exponential(1).truncate(n);
    double const e = std::exp(-n);
    for (int i = 1; i < 1000; ++i)
    {
        double u = i / 1000.0;
        double expect = u <= e ? 0.0 : -std::log(1 - u + e);
        EXPECT_NEAR(t.quantile(u), expect, 1e-12) << u;
    }
}

TEST(Truncate, TwoSidedMassGoesToZero)
{
    auto d = Distribution::truncated_normal(0.5, 1, -INFINITY, INFINITY);
    auto t = d.truncate(1);
    double const below = d.cdf(-1);
    double const above = 1 - d.cdf(1);
    ASSERT_EQ(t.atoms().size(), 1u);
    EXPECT_NEAR(t.atoms()[0].mass, below + above, 1e-14);
    EXPECT_NEAR(t.cdf(-0.5), d.cdf(-0.5) - below, 1e-14);
    EXPECT_NEAR(t.cdf(0.5), d.cdf(0.5) + above, 1e-14);
    EXPECT_GE(t.support().a, -1);
    EXPECT_LE(t.support().b, 1);
}

TEST(Truncate, BoundedLawUnchangedAndBadRadius)
{
    auto u = Distribution::uniform(-1, 1);
    auto t = u.truncate(5);
    EXPECT_TRUE(t.atoms().empty());
    EXPECT_EQ(t.support().a, -1);
    EXPECT_EQ(t.support().b, 1);
    EXPECT_THROW(u.truncate(0), mudk::DomainError);
    EXPECT_THROW(u.truncate(-2), mudk::DomainError);
}

TEST(MinOfUniforms, PointwiseLimit)
{
    auto e = Distribution::exponential(1);
    double const n = 1e4;
    for (int i = 1; i <= 9; ++i)
    {
        double u = i / 10.0;
        double qn = n * (1 - std::pow(1 - u, 1 / n));
        EXPECT_LT(std::abs(qn - e.quantile(u)), 1e-3);
    }
}

TEST(Construction, Invalid)
{
    EXPECT_THROW(Distribution::uniform(1, 1), mudk::DomainError);
    EXPECT_THROW(Distribution::beta(0, 1), mudk::DomainError);
    EXPECT_THROW(Distribution::exponential(-1), mudk::DomainError);
    EXPECT_THROW(Distribution::discrete({{0, 0.5}}), mudk::DomainError);
    EXPECT_THROW(Distribution::discrete({}), mudk::DomainError);
}

TEST(Moments, ClosedForms)
{
    EXPECT_NEAR(Distribution::beta(2, 5).mean(), 2.0 / 7, 1e-14);
    EXPECT_NEAR(Distribution::beta(2, 5).variance(), 10.0 / (49 * 8), 1e-14);
    EXPECT_NEAR(Distribution::uniform(-1, 1).variance(), 1.0 / 3, 1e-14);
    EXPECT_NEAR(Distribution::exponential(2).mean(), 0.5, 1e-14);
    EXPECT_NEAR(two_piece().variance(), 7.0 / 3, 1e-13);
}
