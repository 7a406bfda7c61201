// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hillstat {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error
{
  public:
    using Error::Error;
};

/// A documented precondition does not hold (bad bracket, unbounded variation, ...).
class PreconditionError : public Error
{
  public:
    using Error::Error;
};

/// Invalid run configuration (unknown keys, rejection rate too high, ...).
class ConfigError : public Error
{
  public:
    using Error::Error;
};

/// A numerical iteration exhausted its budget.
///
/// Carries whatever partial information the failing routine had: the last
/// accepted state for integrators, the current estimate and error bound for
/// quadrature.
class ConvergenceError : public Error
{
  public:
    ConvergenceError(std::string const& what,
                     std::vector<double> last_state,
                     double estimate = 0.0,
                     double error_bound = 0.0)
        : Error(what)
        , last_state_(std::move(last_state))
        , estimate_(estimate)
        , error_bound_(error_bound)
    {
    }

    std::vector<double> const& last_state() const noexcept { return last_state_; }
    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

  private:
    std::vector<double> last_state_;
    double estimate_;
    double error_bound_;
};

}  // namespace hillstat
