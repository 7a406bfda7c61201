// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "hillstat/errors.hpp"
#include "hillstat/hill/monodromy.hpp"
#include "hillstat/hill/potential.hpp"
#include "hillstat/numerics/roots.hpp"

namespace hillstat::maps {

using numerics::ToleranceSpec;

/// Logistic orbits from the Mathieu equation y'' + cos(2 pi x) y = lambda y.
///
/// With Delta(lambda) the trace of the unit-cell monodromy, the map
/// f(lambda) = (2 - Delta(lambda)) / 4 is a bijection from [lambda0, lambda*]
/// onto [0, 1], where f(lambda0) = 1 and f(lambda*) = 0. A start value x0
/// is encoded as lambda = f^{-1}(x0); the n-th logistic iterate is then
/// (2 - trace(M^{2^n})) / 4.
class MathieuPipeline
{
  public:
    explicit MathieuPipeline(ToleranceSpec tol = ToleranceSpec::integrator())
        : tol_(tol)
        // In Hill form u'' = (V - E) u this is V = -cos(2 pi x), E = -lambda.
        , V_(hill::Potential::cosine(-1.0))
    {
        lambda0_ = locate(1.0, -0.25);
        lambda_star_ = locate(0.0, 0.05);
    }

    double lambda0() const noexcept { return lambda0_; }
    double lambda_star() const noexcept { return lambda_star_; }

    hill::Monodromy cell_monodromy(double lambda) const
    {
        return hill::monodromy(V_, 1.0, -lambda, tol_);
    }

    double f(double lambda) const { return (2.0 - cell_monodromy(lambda).trace()) / 4.0; }

    /// lambda in [lambda0, lambda*] with f(lambda) = x0.
    double invert(double x0) const
    {
        if (!(x0 >= 0.0 && x0 <= 1.0))
            throw DomainError("MathieuPipeline: x0 must lie in [0, 1]");
        if (x0 == 0.0)
            return lambda_star_;
        if (x0 == 1.0)
            return lambda0_;
        return numerics::find_root([&](double lam) { return f(lam) - x0; }, lambda0_,
                                   lambda_star_, root_tol());
    }

    /// n-th iterate of x0 under F_4, through the monodromy power M^{2^n}.
    double value(double x0, int n) const
    {
        if (n < 0 || n > 62)
            throw DomainError("MathieuPipeline: n must lie in [0, 62]");
        auto const M = cell_monodromy(invert(x0));
        auto const P = hill::monodromy_power(M, 1L << n);
        return (2.0 - P.trace()) / 4.0;
    }

  private:
    static ToleranceSpec root_tol() { return {1e-14, 0.0, 500}; }

    // Walks from 0 in steps of `step` until f - target changes sign, then
    // polishes the crossing.
    double locate(double target, double step) const
    {
        auto g = [&](double lam) { return f(lam) - target; };
        double a = 0.0;
        double ga = g(a);
        for (int i = 0; i < 400; ++i)
        {
            double const b = a + step;
            double const gb = g(b);
            if ((ga <= 0.0) != (gb <= 0.0) || gb == 0.0)
                return step < 0.0 ? numerics::find_root(g, b, a, root_tol())
                                  : numerics::find_root(g, a, b, root_tol());
            a = b;
            ga = gb;
        }
        throw ConvergenceError("MathieuPipeline: could not bracket f(lambda) = "
                                   + std::to_string(target),
                               {a, ga});
    }

    ToleranceSpec tol_;
    hill::Potential V_;
    double lambda0_ = 0.0;
    double lambda_star_ = 0.0;
};

/// One-shot form of MathieuPipeline::value.
inline double mathieu_formula(double x0, int n, ToleranceSpec const& tol = ToleranceSpec::integrator())
{
    return MathieuPipeline(tol).value(x0, n);
}

}  // namespace hillstat::maps
