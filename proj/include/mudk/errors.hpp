// SPDX-License-Identifier: Apache-2.0
//! \file mudk/errors.hpp
#pragma once

#include <stdexcept>
#include <string>

namespace mudk
{
//! Argument outside an operation's mathematical domain.
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

//! Discretization requested on a law whose support is not bounded.
class UnboundedSupportError : public DomainError
{
  public:
    using DomainError::DomainError;
};

//! Operation not available for this distribution family.
class UnsupportedFamilyError : public DomainError
{
  public:
    using DomainError::DomainError;
};

//! Base for failures of a numerical procedure (not of its inputs).
class NumericalError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Evaluation point sits on a logarithmic singularity of a Hilbert transform.
class PoleError : public NumericalError
{
  public:
    using NumericalError::NumericalError;
};

//! Boundary polygon is not a simple closed curve.
class TopologyError : public NumericalError
{
  public:
    using NumericalError::NumericalError;
};

//! Principal-value oracle did not converge.
class OracleError : public NumericalError
{
  public:
    using NumericalError::NumericalError;
};

//! Invalid or inconsistent run configuration.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! File could not be read or written.
class IoError : public std::runtime_error
{
  public:
    IoError(std::string const& path, std::string const& what)
        : std::runtime_error(path + ": " + what), path_(path)
    {
    }

    std::string const& path() const { return path_; }

  private:
    std::string path_;
};

}  // namespace mudk
