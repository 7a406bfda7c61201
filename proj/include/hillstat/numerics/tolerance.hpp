// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>

#include "hillstat/errors.hpp"

namespace hillstat::numerics {

/// Accuracy contract shared by the integrator, root finder and quadrature.
struct ToleranceSpec
{
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    long max_steps = 1'000'000;

    void validate() const
    {
        if (!(abs_tol > 0.0) || !std::isfinite(abs_tol))
            throw PreconditionError("ToleranceSpec: abs_tol must be positive, got "
                                    + std::to_string(abs_tol));
        if (!(rel_tol >= 0.0) || !std::isfinite(rel_tol))
            throw PreconditionError("ToleranceSpec: rel_tol must be nonnegative, got "
                                    + std::to_string(rel_tol));
        if (max_steps < 1)
            throw PreconditionError("ToleranceSpec: max_steps must be >= 1");
    }

    static constexpr ToleranceSpec integrator() { return {1e-10, 1e-10, 1'000'000}; }
    static constexpr ToleranceSpec root() { return {1e-12, 0.0, 500}; }
    static constexpr ToleranceSpec quadrature() { return {1e-10, 0.0, 20'000}; }
};

}  // namespace hillstat::numerics
