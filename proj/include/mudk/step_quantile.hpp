// SPDX-License-Identifier: Apache-2.0
//! \file mudk/step_quantile.hpp
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace mudk
{
//---------------------------------------------------------------------------//
/*!
 * Non-decreasing right-open step function on (0, sigma_m).
 *
 * Value j holds on (breakpoints[j], breakpoints[j + 1]). Intervals listed in
 * atom_intervals encode the level range (F(a^-), F(a)) of an atom a. The mesh
 * is the grid spacing (b - a) / n of the scheme that produced the steps, or 0
 * when unknown.
 */
class StepQuantile
{
  public:
    StepQuantile(std::vector<double> breakpoints, std::vector<double> values,
                 std::vector<std::size_t> atom_intervals = {}, double mesh = 0)
        : breakpoints_(std::move(breakpoints))
        , values_(std::move(values))
        , atom_intervals_(std::move(atom_intervals))
        , mesh_(mesh)
    {
        if (values_.empty() || breakpoints_.size() != values_.size() + 1)
        {
            throw DomainError("step quantile needs m values and m + 1 "
                              "breakpoints, m >= 1");
        }
        if (breakpoints_.front() != 0)
        {
            throw DomainError("first breakpoint must be 0");
        }
        for (std::size_t j = 1; j < breakpoints_.size(); ++j)
        {
            if (!(breakpoints_[j] >= breakpoints_[j - 1])
                || !std::isfinite(breakpoints_[j]))
            {
                throw DomainError("breakpoints must be finite, non-decreasing");
            }
        }
        if (!(breakpoints_.back() > 0))
        {
            throw DomainError("step quantile carries no mass");
        }
        for (std::size_t j = 0; j < values_.size(); ++j)
        {
            if (!std::isfinite(values_[j])
                || (j > 0 && values_[j] < values_[j - 1]))
            {
                throw DomainError("step values must be finite, non-decreasing");
            }
        }
        for (auto j : atom_intervals_)
        {
            if (j >= values_.size())
            {
                throw DomainError("atom interval index out of range");
            }
        }
    }

    std::span<double const> breakpoints() const { return breakpoints_; }
    std::span<double const> values() const { return values_; }
    std::span<std::size_t const> atom_intervals() const
    {
        return atom_intervals_;
    }
    double mesh() const { return mesh_; }
    std::size_t steps() const { return values_.size(); }

    //! Final breakpoint sigma_m.
    double total_mass() const { return breakpoints_.back(); }

    double width(std::size_t j) const
    {
        return breakpoints_[j + 1] - breakpoints_[j];
    }

    double min_value() const { return values_.front(); }
    double max_value() const { return values_.back(); }

    //! Value on the interval containing u; left-continuous at breakpoints.
    double eval(double u) const
    {
        if (!(u > 0 && u < total_mass()))
        {
            throw DomainError("step quantile evaluated outside (0, "
                              + std::to_string(total_mass()) + ")");
        }
        return values_[interval_of(u)];
    }

    //! eval with u clamped into (0, sigma_m].
    double eval_clamped(double u) const
    {
        if (u <= 0)
            return values_.front();
        if (u >= total_mass())
            return values_.back();
        return values_[interval_of(u)];
    }

    //! Index j of the interval (sigma_j, sigma_{j+1}] holding u.
    std::size_t interval_of(double u) const
    {
        auto it = std::lower_bound(breakpoints_.begin() + 1, breakpoints_.end(),
                                   u);
        auto j = static_cast<std::size_t>(it - (breakpoints_.begin() + 1));
        return std::min(j, values_.size() - 1);
    }

    /*!
     * Same steps viewed on (0, 1).
     *
     * Levels past 1 are cut off; when sigma_m < 1 the last step is extended
     * to 1, matching clamped evaluation.
     */
    StepQuantile unit_restricted() const
    {
        if (total_mass() == 1)
        {
            return *this;
        }
        std::vector<double> bp{0};
        std::vector<double> vals;
        std::vector<std::size_t> atoms;
        for (std::size_t j = 0; j < values_.size(); ++j)
        {
            if (breakpoints_[j] >= 1)
                break;
            vals.push_back(values_[j]);
            bp.push_back(std::min(breakpoints_[j + 1], 1.0));
            if (std::find(atom_intervals_.begin(), atom_intervals_.end(), j)
                != atom_intervals_.end())
            {
                atoms.push_back(j);
            }
        }
        bp.back() = 1;
        return StepQuantile(std::move(bp), std::move(vals), std::move(atoms),
                            mesh_);
    }

  private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
    std::vector<std::size_t> atom_intervals_;
    double mesh_;
};

}  // namespace mudk
