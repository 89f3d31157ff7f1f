// SPDX-License-Identifier: Apache-2.0
//! \file mudk/distributions.hpp
//! Probability laws on the real line: c.d.f., quantile, strict quantile,
//! inverse-transform sampling, centering and truncation.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "errors.hpp"

namespace mudk
{
enum class Family
{
    uniform,
    beta,
    exponential,
    truncated_normal,
    two_piece_uniform,
    discrete,
    mixture,
};

inline std::string_view to_string(Family f)
{
    switch (f)
    {
        case Family::uniform: return "uniform";
        case Family::beta: return "beta";
        case Family::exponential: return "exponential";
        case Family::truncated_normal: return "truncated-normal";
        case Family::two_piece_uniform: return "two-piece-uniform";
        case Family::discrete: return "discrete";
        case Family::mixture: return "mixture";
    }
    return "unknown";
}

struct Atom
{
    double location;
    double mass;
};

//! Closed hull of the support; a == b only for a single point mass.
struct Support
{
    double a;
    double b;

    bool bounded() const { return std::isfinite(a) && std::isfinite(b); }
    double width() const { return b - a; }
};

class Distribution;

namespace detail
{
inline constexpr double inf = std::numeric_limits<double>::infinity();
inline constexpr double bisection_tol = 1e-12;

inline void require_level(double u)
{
    if (!(u > 0 && u < 1))
    {
        throw DomainError("quantile level must lie in (0, 1), got "
                          + std::to_string(u));
    }
}

//---------------------------------------------------------------------------//
/*!
 * A law in its native coordinates.
 *
 * Partial moments integrate x^k over the half-open set (lo, hi], atoms
 * included. Quantile routines default to bisection on the c.d.f. with atom
 * levels resolved exactly.
 */
class Law
{
  public:
    virtual ~Law() = default;

    virtual Family family() const = 0;
    virtual Support support() const = 0;
    virtual double cdf(double x) const = 0;

    virtual double cdf_left(double x) const
    {
        double left = cdf(x);
        for (auto const& atom : atoms())
        {
            if (atom.location == x)
            {
                left -= atom.mass;
            }
        }
        return std::max(left, 0.0);
    }

    virtual std::vector<Atom> atoms() const { return {}; }
    virtual bool has_density() const { return true; }
    virtual double density(double x) const = 0;
    virtual double density_sup(double lo, double hi) const = 0;
    virtual double partial_moment(double lo, double hi, int k) const = 0;

    //! Levels between which the quantile is affine; empty if unknown.
    virtual std::vector<double> affine_levels() const { return {}; }

    virtual std::optional<double> truncation_radius() const
    {
        return std::nullopt;
    }

    virtual double quantile(double u) const
    {
        for (auto const& atom : atoms())
        {
            if (cdf_left(atom.location) < u && u <= cdf(atom.location))
            {
                return atom.location;
            }
        }
        return bisect(u, /* strict = */ false);
    }

    virtual double strict_quantile(double u) const
    {
        for (auto const& atom : atoms())
        {
            if (cdf_left(atom.location) <= u && u < cdf(atom.location))
            {
                return atom.location;
            }
        }
        return bisect(u, /* strict = */ true);
    }

  protected:
    //! Smallest x with F(x) >= u (or F(x) > u when strict).
    double bisect(double u, bool strict) const
    {
        auto accept = [&](double x) {
            double const f = cdf(x);
            return strict ? f > u : f >= u;
        };
        auto [a, b] = support();
        double lo = a;
        double hi = b;
        if (std::isfinite(lo))
        {
            if (accept(lo))
            {
                return lo;
            }
        }
        else
        {
            lo = std::isfinite(hi) ? hi - 1 : -1;
            for (double step = 1; accept(lo); step *= 2)
            {
                lo -= step;
            }
        }
        if (!std::isfinite(hi))
        {
            hi = std::max(lo, 0.0) + 1;
            for (double step = 1; !accept(hi); step *= 2)
            {
                hi += step;
            }
        }
        for (int iter = 0; iter < 400 && hi - lo > bisection_tol; ++iter)
        {
            double const mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi)
            {
                break;
            }
            (accept(mid) ? hi : lo) = mid;
        }
        return hi;
    }
};

//! Integral of x^k over (lo, hi] for k = 0, 1, 2 against dx.
inline double power_integral(double lo, double hi, int k)
{
    if (!(hi > lo))
    {
        return 0;
    }
    double const p = k + 1;
    return (std::pow(hi, p) - std::pow(lo, p)) / p;
}

class UniformLaw final : public Law
{
  public:
    UniformLaw(double a, double b) : a_(a), b_(b)
    {
        if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        {
            throw DomainError("uniform law needs finite a < b");
        }
    }

    Family family() const override { return Family::uniform; }
    Support support() const override { return {a_, b_}; }

    double cdf(double x) const override
    {
        if (x <= a_)
            return 0;
        if (x >= b_)
            return 1;
        return (x - a_) / (b_ - a_);
    }

    double quantile(double u) const override { return a_ + (b_ - a_) * u; }
    double strict_quantile(double u) const override { return quantile(u); }

    double density(double x) const override
    {
        return (x >= a_ && x < b_) ? 1 / (b_ - a_) : 0;
    }

    double density_sup(double lo, double hi) const override
    {
        return (hi > a_ && lo < b_) ? 1 / (b_ - a_) : 0;
    }

    double partial_moment(double lo, double hi, int k) const override
    {
        return power_integral(std::max(lo, a_), std::min(hi, b_), k)
               / (b_ - a_);
    }

    std::vector<double> affine_levels() const override { return {0, 1}; }

  private:
    double a_;
    double b_;
};

class BetaLaw final : public Law
{
  public:
    BetaLaw(double alpha, double beta) : dist_(check(alpha, beta), beta) {}

    Family family() const override { return Family::beta; }
    Support support() const override { return {0, 1}; }

    double cdf(double x) const override
    {
        if (x <= 0)
            return 0;
        if (x >= 1)
            return 1;
        return boost::math::cdf(dist_, x);
    }

    double quantile(double u) const override
    {
        return boost::math::quantile(dist_, u);
    }
    double strict_quantile(double u) const override { return quantile(u); }

    double density(double x) const override
    {
        if (x < 0 || x > 1)
            return 0;
        double const a = dist_.alpha();
        double const b = dist_.beta();
        if ((x == 0 && a < 1) || (x == 1 && b < 1))
            return inf;
        return boost::math::pdf(dist_, x);
    }

    double density_sup(double lo, double hi) const override
    {
        lo = std::max(lo, 0.0);
        hi = std::min(hi, 1.0);
        if (!(hi >= lo))
            return 0;
        double const a = dist_.alpha();
        double const b = dist_.beta();
        if (a < 1 || b < 1)
        {
            // Unbounded at the singular end; bounded away from it.
            if ((a < 1 && lo == 0) || (b < 1 && hi == 1))
                return inf;
            // Monotone or U-shaped: the sup sits at an endpoint.
            return std::max(density(lo), density(hi));
        }
        return density(mode_clamped(lo, hi));
    }

    double partial_moment(double lo, double hi, int k) const override
    {
        lo = std::clamp(lo, 0.0, 1.0);
        hi = std::clamp(hi, 0.0, 1.0);
        if (!(hi > lo))
            return 0;
        double const a = dist_.alpha();
        double const b = dist_.beta();
        double ratio = 1;
        for (int j = 0; j < k; ++j)
        {
            ratio *= (a + j) / (a + b + j);
        }
        using boost::math::ibeta;
        return ratio * (ibeta(a + k, b, hi) - ibeta(a + k, b, lo));
    }

  private:
    static double check(double alpha, double beta)
    {
        if (!(alpha > 0 && beta > 0))
        {
            throw DomainError("beta law needs positive shape parameters");
        }
        return alpha;
    }

    double mode_clamped(double lo, double hi) const
    {
        double const a = dist_.alpha();
        double const b = dist_.beta();
        double mode = a + b > 2 ? (a - 1) / (a + b - 2) : 0.5;
        return std::clamp(mode, lo, hi);
    }

    boost::math::beta_distribution<double> dist_;
};

class ExponentialLaw final : public Law
{
  public:
    explicit ExponentialLaw(double rate) : rate_(rate)
    {
        if (!(rate > 0) || !std::isfinite(rate))
        {
            throw DomainError("exponential law needs a positive rate");
        }
    }

    Family family() const override { return Family::exponential; }
    Support support() const override { return {0, inf}; }

    double cdf(double x) const override
    {
        return x <= 0 ? 0 : -std::expm1(-rate_ * x);
    }

    double quantile(double u) const override
    {
        return -std::log1p(-u) / rate_;
    }
    double strict_quantile(double u) const override { return quantile(u); }

    double density(double x) const override
    {
        return x < 0 ? 0 : rate_ * std::exp(-rate_ * x);
    }

    double density_sup(double lo, double hi) const override
    {
        return hi < 0 ? 0 : density(std::max(lo, 0.0));
    }

    double partial_moment(double lo, double hi, int k) const override
    {
        lo = std::max(lo, 0.0);
        if (!(hi > lo))
            return 0;
        // Antiderivative of rate * x^k * exp(-rate x).
        auto anti = [&](double x) -> double {
            if (!std::isfinite(x))
                return 0;
            double const e = std::exp(-rate_ * x);
            double const s = 1 / rate_;
            switch (k)
            {
                case 0: return -e;
                case 1: return -(x + s) * e;
                default: return -(x * x + 2 * s * x + 2 * s * s) * e;
            }
        };
        return anti(hi) - anti(lo);
    }

  private:
    double rate_;
};

inline double std_normal_cdf(double z)
{
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

inline double std_normal_pdf(double z)
{
    if (!std::isfinite(z))
        return 0;
    return std::exp(-0.5 * z * z) / std::sqrt(2 * M_PI);
}

//! Normal law restricted to [lo, hi]; quantile by bisection on the c.d.f.
class TruncatedNormalLaw final : public Law
{
  public:
    TruncatedNormalLaw(double mean, double sd, double lo, double hi)
        : mean_(mean), sd_(sd), lo_(lo), hi_(hi)
    {
        if (!(sd > 0) || !(lo < hi))
        {
            throw DomainError("truncated normal needs sd > 0 and lo < hi");
        }
        cdf_lo_ = std_normal_cdf((lo - mean) / sd);
        mass_ = std_normal_cdf((hi - mean) / sd) - cdf_lo_;
        if (!(mass_ > 0))
        {
            throw DomainError("truncated normal window carries no mass");
        }
    }

    Family family() const override { return Family::truncated_normal; }
    Support support() const override { return {lo_, hi_}; }

    double cdf(double x) const override
    {
        if (x <= lo_)
            return 0;
        if (x >= hi_)
            return 1;
        double const v = (std_normal_cdf((x - mean_) / sd_) - cdf_lo_) / mass_;
        return std::clamp(v, 0.0, 1.0);
    }

    double density(double x) const override
    {
        if (x < lo_ || x >= hi_)
            return 0;
        return std_normal_pdf((x - mean_) / sd_) / (sd_ * mass_);
    }

    double density_sup(double lo, double hi) const override
    {
        lo = std::max(lo, lo_);
        hi = std::min(hi, hi_);
        if (!(hi >= lo))
            return 0;
        return density(std::clamp(mean_, lo, hi));
    }

    double partial_moment(double lo, double hi, int k) const override
    {
        lo = std::max(lo, lo_);
        hi = std::min(hi, hi_);
        if (!(hi > lo))
            return 0;
        double const zl = (lo - mean_) / sd_;
        double const zh = (hi - mean_) / sd_;
        double const m0 = std_normal_cdf(zh) - std_normal_cdf(zl);
        double const m1 = std_normal_pdf(zl) - std_normal_pdf(zh);
        double const m2 = m0 + zl * std_normal_pdf(zl) - zh * std_normal_pdf(zh);
        double v = 0;
        switch (k)
        {
            case 0: v = m0; break;
            case 1: v = mean_ * m0 + sd_ * m1; break;
            default:
                v = mean_ * mean_ * m0 + 2 * mean_ * sd_ * m1
                    + sd_ * sd_ * m2;
        }
        return v / mass_;
    }

  private:
    double mean_;
    double sd_;
    double lo_;
    double hi_;
    double cdf_lo_;
    double mass_;
};

//! Uniform on (a1, b1) with weight w1 and on (a2, b2) with weight 1 - w1.
class TwoPieceUniformLaw final : public Law
{
  public:
    TwoPieceUniformLaw(double a1, double b1, double a2, double b2, double w1)
        : a1_(a1), b1_(b1), a2_(a2), b2_(b2), w1_(w1)
    {
        if (!(a1 < b1 && b1 <= a2 && a2 < b2) || !(w1 > 0 && w1 < 1))
        {
            throw DomainError(
                "two-piece uniform needs a1 < b1 <= a2 < b2 and weight in "
                "(0, 1)");
        }
    }

    Family family() const override { return Family::two_piece_uniform; }
    Support support() const override { return {a1_, b2_}; }

    double cdf(double x) const override
    {
        if (x <= a1_)
            return 0;
        if (x < b1_)
            return w1_ * (x - a1_) / (b1_ - a1_);
        if (x <= a2_)
            return w1_;
        if (x < b2_)
            return w1_ + (1 - w1_) * (x - a2_) / (b2_ - a2_);
        return 1;
    }

    double quantile(double u) const override
    {
        if (u <= w1_)
            return a1_ + (b1_ - a1_) * u / w1_;
        return a2_ + (b2_ - a2_) * (u - w1_) / (1 - w1_);
    }

    double strict_quantile(double u) const override
    {
        if (u < w1_)
            return a1_ + (b1_ - a1_) * u / w1_;
        return a2_ + (b2_ - a2_) * (u - w1_) / (1 - w1_);
    }

    double density(double x) const override
    {
        if (x >= a1_ && x < b1_)
            return w1_ / (b1_ - a1_);
        if (x >= a2_ && x < b2_)
            return (1 - w1_) / (b2_ - a2_);
        return 0;
    }

    double density_sup(double lo, double hi) const override
    {
        double s = 0;
        if (hi > a1_ && lo < b1_)
            s = std::max(s, w1_ / (b1_ - a1_));
        if (hi > a2_ && lo < b2_)
            s = std::max(s, (1 - w1_) / (b2_ - a2_));
        return s;
    }

    double partial_moment(double lo, double hi, int k) const override
    {
        return w1_ / (b1_ - a1_)
                   * power_integral(std::max(lo, a1_), std::min(hi, b1_), k)
               + (1 - w1_) / (b2_ - a2_)
                     * power_integral(std::max(lo, a2_), std::min(hi, b2_), k);
    }

    std::vector<double> affine_levels() const override
    {
        return {0, w1_, 1};
    }

  private:
    double a1_, b1_, a2_, b2_, w1_;
};

class DiscreteLaw final : public Law
{
  public:
    explicit DiscreteLaw(std::vector<Atom> atoms)
    {
        std::sort(atoms.begin(), atoms.end(), [](Atom const& l, Atom const& r) {
            return l.location < r.location;
        });
        double total = 0;
        for (auto const& atom : atoms)
        {
            if (!(atom.mass > 0) || !std::isfinite(atom.location))
            {
                throw DomainError("atoms need finite locations, positive mass");
            }
            if (!atoms_.empty() && atoms_.back().location == atom.location)
            {
                atoms_.back().mass += atom.mass;
            }
            else
            {
                atoms_.push_back(atom);
            }
            total += atom.mass;
        }
        if (atoms_.empty() || std::abs(total - 1) > 1e-9)
        {
            throw DomainError("discrete law masses must sum to 1");
        }
        double running = 0;
        for (auto& atom : atoms_)
        {
            atom.mass /= total;
            running += atom.mass;
            cumulative_.push_back(running);
        }
        cumulative_.back() = 1;
    }

    Family family() const override { return Family::discrete; }
    Support support() const override
    {
        return {atoms_.front().location, atoms_.back().location};
    }

    double cdf(double x) const override
    {
        auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x,
                                   [](double v, Atom const& a) {
                                       return v < a.location;
                                   });
        auto idx = it - atoms_.begin();
        return idx == 0 ? 0 : cumulative_[idx - 1];
    }

    double cdf_left(double x) const override
    {
        auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                                   [](Atom const& a, double v) {
                                       return a.location < v;
                                   });
        auto idx = it - atoms_.begin();
        return idx == 0 ? 0 : cumulative_[idx - 1];
    }

    double quantile(double u) const override
    {
        auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
        return atoms_[std::min<std::size_t>(it - cumulative_.begin(),
                                            atoms_.size() - 1)]
            .location;
    }

    double strict_quantile(double u) const override
    {
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        return atoms_[std::min<std::size_t>(it - cumulative_.begin(),
                                            atoms_.size() - 1)]
            .location;
    }

    std::vector<Atom> atoms() const override { return atoms_; }
    bool has_density() const override { return false; }
    double density(double) const override { return 0; }
    double density_sup(double, double) const override { return 0; }

    double partial_moment(double lo, double hi, int k) const override
    {
        double s = 0;
        for (auto const& atom : atoms_)
        {
            if (atom.location > lo && atom.location <= hi)
            {
                s += atom.mass * std::pow(atom.location, k);
            }
        }
        return s;
    }

    std::vector<double> affine_levels() const override
    {
        std::vector<double> levels{0};
        levels.insert(levels.end(), cumulative_.begin(), cumulative_.end());
        return levels;
    }

  private:
    std::vector<Atom> atoms_;
    std::vector<double> cumulative_;
};

class MixtureLaw;
class TruncatedLaw;

}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * A probability law on the real line.
 *
 * Stored as an affine image scale * L + offset of a native law L, with
 * scale > 0. Values are immutable and cheap to copy; the native law is
 * shared.
 */
class Distribution
{
  public:
    static Distribution uniform(double a, double b)
    {
        return Distribution(std::make_shared<detail::UniformLaw>(a, b));
    }

    static Distribution beta(double alpha, double beta)
    {
        return Distribution(std::make_shared<detail::BetaLaw>(alpha, beta));
    }

    static Distribution exponential(double rate = 1)
    {
        return Distribution(std::make_shared<detail::ExponentialLaw>(rate));
    }

    static Distribution truncated_normal(double mean, double sd, double lo,
                                         double hi)
    {
        return Distribution(
            std::make_shared<detail::TruncatedNormalLaw>(mean, sd, lo, hi));
    }

    //! Uniform on the union of two intervals; weights default to lengths.
    static Distribution two_piece_uniform(double a1, double b1, double a2,
                                          double b2,
                                          std::optional<double> w1 = {})
    {
        double const weight = w1.value_or((b1 - a1) / ((b1 - a1) + (b2 - a2)));
        return Distribution(std::make_shared<detail::TwoPieceUniformLaw>(
            a1, b1, a2, b2, weight));
    }

    static Distribution discrete(std::vector<Atom> atoms)
    {
        return Distribution(
            std::make_shared<detail::DiscreteLaw>(std::move(atoms)));
    }

    static Distribution
    mixture(std::vector<std::pair<double, Distribution>> components);

    //// ACCESSORS ////

    Family family() const { return law_->family(); }

    Support support() const
    {
        auto s = law_->support();
        return {scale_ * s.a + offset_, scale_ * s.b + offset_};
    }

    std::vector<Atom> atoms() const
    {
        auto atoms = law_->atoms();
        for (auto& atom : atoms)
        {
            atom.location = to_outer(atom.location);
        }
        return atoms;
    }

    //! Shift applied by centering (0 if never centered).
    double mean_shift() const { return mean_shift_; }

    //! Radius n if this law was produced by truncate(n).
    std::optional<double> truncation_radius() const
    {
        return law_->truncation_radius();
    }

    //// EVALUATION ////

    double cdf(double x) const { return law_->cdf(to_inner(x)); }
    double cdf_left(double x) const { return law_->cdf_left(to_inner(x)); }
    double mass_at(double x) const { return cdf(x) - cdf_left(x); }

    double quantile(double u) const
    {
        detail::require_level(u);
        return to_outer(law_->quantile(u));
    }

    double strict_quantile(double u) const
    {
        detail::require_level(u);
        return to_outer(law_->strict_quantile(u));
    }

    //! Quantile extended to u = 0 and u = 1 by the support endpoints.
    double quantile_limit(double u) const
    {
        if (u <= 0)
            return support().a;
        if (u >= 1)
            return support().b;
        return to_outer(law_->quantile(u));
    }

    //! Inverse-transform sampling of uniform variates.
    std::vector<double> sample(std::span<double const> uniforms) const
    {
        std::vector<double> out;
        out.reserve(uniforms.size());
        for (double u : uniforms)
        {
            out.push_back(quantile(u));
        }
        return out;
    }

    bool has_density() const { return law_->has_density(); }

    //! Right-continuous density of the absolutely continuous part.
    double density(double x) const
    {
        return law_->density(to_inner(x)) / scale_;
    }

    double density_sup(double lo, double hi) const
    {
        return law_->density_sup(to_inner(lo), to_inner(hi)) / scale_;
    }

    //! Integral of x^k over (lo, hi] for k in {0, 1, 2}.
    double partial_moment(double lo, double hi, int k) const
    {
        double const ilo = to_inner(lo);
        double const ihi = to_inner(hi);
        double const m0 = law_->partial_moment(ilo, ihi, 0);
        if (k == 0)
            return m0;
        double const m1 = law_->partial_moment(ilo, ihi, 1);
        if (k == 1)
            return scale_ * m1 + offset_ * m0;
        double const m2 = law_->partial_moment(ilo, ihi, 2);
        return scale_ * scale_ * m2 + 2 * scale_ * offset_ * m1
               + offset_ * offset_ * m0;
    }

    double mean() const { return partial_moment(-detail::inf, detail::inf, 1); }

    double variance() const
    {
        double const m = mean();
        return std::max(partial_moment(-detail::inf, detail::inf, 2) - m * m,
                        0.0);
    }

    double continuous_mass() const
    {
        double atom_mass = 0;
        for (auto const& atom : law_->atoms())
        {
            atom_mass += atom.mass;
        }
        return std::max(1 - atom_mass, 0.0);
    }

    //! Levels between which the quantile is affine (empty if not known).
    std::vector<double> affine_levels() const { return law_->affine_levels(); }

    //// TRANSFORMS ////

    //! Image of the law under x -> scale * x + offset, scale > 0.
    Distribution affine(double scale, double offset) const
    {
        if (!(scale > 0) || !std::isfinite(scale) || !std::isfinite(offset))
        {
            throw DomainError("affine image needs a finite positive scale");
        }
        Distribution d = *this;
        d.scale_ = scale * scale_;
        d.offset_ = scale * offset_ + offset;
        return d;
    }

    //! Shift to zero mean, recording the shift.
    Distribution center() const
    {
        double const m = mean();
        if (!std::isfinite(m))
        {
            throw DomainError("cannot center a law without a finite mean");
        }
        Distribution d = affine(1, -m);
        d.mean_shift_ = mean_shift_ - m;
        return d;
    }

    //! Move the mass outside [-n, n] to an atom at 0.
    Distribution truncate(double n) const;

  private:
    explicit Distribution(std::shared_ptr<detail::Law const> law)
        : law_(std::move(law))
    {
    }

    double to_inner(double x) const { return (x - offset_) / scale_; }
    double to_outer(double x) const { return scale_ * x + offset_; }

    std::shared_ptr<detail::Law const> law_;
    double scale_ = 1;
    double offset_ = 0;
    double mean_shift_ = 0;
};

namespace detail
{
class MixtureLaw final : public Law
{
  public:
    explicit MixtureLaw(std::vector<std::pair<double, Distribution>> parts)
        : parts_(std::move(parts))
    {
        double total = 0;
        for (auto const& [w, d] : parts_)
        {
            if (!(w > 0))
            {
                throw DomainError("mixture weights must be positive");
            }
            total += w;
        }
        if (parts_.empty() || std::abs(total - 1) > 1e-9)
        {
            throw DomainError("mixture weights must sum to 1");
        }
        for (auto& part : parts_)
        {
            part.first /= total;
        }
    }

    Family family() const override { return Family::mixture; }

    Support support() const override
    {
        Support s{inf, -inf};
        for (auto const& [w, d] : parts_)
        {
            s.a = std::min(s.a, d.support().a);
            s.b = std::max(s.b, d.support().b);
        }
        return s;
    }

    double cdf(double x) const override
    {
        return sum([x](Distribution const& d) { return d.cdf(x); });
    }

    double cdf_left(double x) const override
    {
        return sum([x](Distribution const& d) { return d.cdf_left(x); });
    }

    std::vector<Atom> atoms() const override
    {
        std::vector<Atom> all;
        for (auto const& [w, d] : parts_)
        {
            for (auto atom : d.atoms())
            {
                atom.mass *= w;
                all.push_back(atom);
            }
        }
        std::sort(all.begin(), all.end(), [](Atom const& l, Atom const& r) {
            return l.location < r.location;
        });
        std::vector<Atom> merged;
        for (auto const& atom : all)
        {
            if (!merged.empty() && merged.back().location == atom.location)
                merged.back().mass += atom.mass;
            else
                merged.push_back(atom);
        }
        return merged;
    }

    bool has_density() const override
    {
        return std::any_of(parts_.begin(), parts_.end(),
                           [](auto const& p) { return p.second.has_density(); });
    }

    double density(double x) const override
    {
        return sum([x](Distribution const& d) {
            return d.has_density() ? d.density(x) : 0.0;
        });
    }

    double density_sup(double lo, double hi) const override
    {
        return sum([lo, hi](Distribution const& d) {
            return d.has_density() ? d.density_sup(lo, hi) : 0.0;
        });
    }

    double partial_moment(double lo, double hi, int k) const override
    {
        return sum([=](Distribution const& d) {
            return d.partial_moment(lo, hi, k);
        });
    }

  private:
    template<class F>
    double sum(F&& f) const
    {
        double s = 0;
        for (auto const& [w, d] : parts_)
        {
            s += w * f(d);
        }
        return s;
    }

    std::vector<std::pair<double, Distribution>> parts_;
};

//---------------------------------------------------------------------------//
/*!
 * Law of X 1{|X| <= n}.
 *
 * F_n(x) = F(x) - F(-n^-) on [-n, 0) and F(x) + 1 - F(n) on [0, n]; the
 * quantile follows the matching three-case formula.
 */
class TruncatedLaw final : public Law
{
  public:
    TruncatedLaw(Distribution base, double n) : base_(std::move(base)), n_(n)
    {
        below_ = base_.cdf_left(-n);
        above_ = 1 - base_.cdf(n);
        zero_lo_ = base_.cdf_left(0) - below_;
        zero_hi_ = base_.cdf(0) + above_;
    }

    Family family() const override { return base_.family(); }
    std::optional<double> truncation_radius() const override { return n_; }

    Support support() const override
    {
        auto s = base_.support();
        Support out{std::max(s.a, -n_), std::min(s.b, n_)};
        if (below_ + above_ > 0)
        {
            out.a = std::min(out.a, 0.0);
            out.b = std::max(out.b, 0.0);
        }
        return out;
    }

    double cdf(double x) const override
    {
        if (x < -n_)
            return 0;
        if (x < 0)
            return std::max(base_.cdf(x) - below_, 0.0);
        if (x < n_)
            return std::min(base_.cdf(x) + above_, 1.0);
        return 1;
    }

    double cdf_left(double x) const override
    {
        if (x <= -n_)
            return 0;
        if (x <= 0)
            return std::max(base_.cdf_left(x) - below_, 0.0);
        if (x <= n_)
            return std::min(base_.cdf_left(x) + above_, 1.0);
        return 1;
    }

    double quantile(double u) const override
    {
        if (u <= zero_lo_)
            return base_.quantile(std::min(u + below_, nearly_one));
        if (u <= zero_hi_)
            return 0;
        return base_.quantile(std::max(u - above_, nearly_zero));
    }

    double strict_quantile(double u) const override
    {
        if (u < zero_lo_)
            return base_.strict_quantile(std::min(u + below_, nearly_one));
        if (u < zero_hi_)
            return 0;
        return base_.strict_quantile(std::max(u - above_, nearly_zero));
    }

    std::vector<Atom> atoms() const override
    {
        std::vector<Atom> out;
        bool zero_done = false;
        double const zero_mass = zero_hi_ - zero_lo_;
        for (auto const& atom : base_.atoms())
        {
            if (atom.location < -n_ || atom.location > n_)
                continue;
            if (!zero_done && atom.location >= 0 && zero_mass > 0)
            {
                out.push_back({0, zero_mass});
                zero_done = true;
            }
            if (atom.location != 0)
                out.push_back(atom);
        }
        if (!zero_done && zero_mass > 0)
            out.push_back({0, zero_mass});
        return out;
    }

    bool has_density() const override { return base_.has_density(); }

    double density(double x) const override
    {
        return (x >= -n_ && x <= n_ && base_.has_density()) ? base_.density(x)
                                                            : 0;
    }

    double density_sup(double lo, double hi) const override
    {
        lo = std::max(lo, -n_);
        hi = std::min(hi, n_);
        if (!(hi >= lo) || !base_.has_density())
            return 0;
        return base_.density_sup(lo, hi);
    }

    double partial_moment(double lo, double hi, int k) const override
    {
        double const blo = lo < -n_ ? std::nextafter(-n_, -inf) : lo;
        double const bhi = std::min(hi, n_);
        double s = bhi > blo ? base_.partial_moment(blo, bhi, k) : 0;
        if (k == 0 && lo < 0 && hi >= 0)
            s += below_ + above_;
        return s;
    }

  private:
    static constexpr double nearly_one = 1 - 1e-16;
    static constexpr double nearly_zero = 1e-300;

    Distribution base_;
    double n_;
    double below_;
    double above_;
    double zero_lo_;
    double zero_hi_;
};
}  // namespace detail

inline Distribution
Distribution::mixture(std::vector<std::pair<double, Distribution>> components)
{
    return Distribution(
        std::make_shared<detail::MixtureLaw>(std::move(components)));
}

inline Distribution Distribution::truncate(double n) const
{
    if (!(n > 0) || !std::isfinite(n))
    {
        throw DomainError("truncation radius must be positive");
    }
    auto s = support();
    if (s.a >= -n && s.b <= n)
    {
        return *this;
    }
    return Distribution(std::make_shared<detail::TruncatedLaw>(*this, n));
}

}  // namespace mudk
