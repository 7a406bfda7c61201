// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "hillstat/errors.hpp"
#include "hillstat/numerics/tolerance.hpp"

namespace hillstat::numerics {

/// Bracketed root of f on [a, b] (Brent: bisection safeguarding secant and
/// inverse quadratic steps).
///
/// Requires f(a) * f(b) <= 0. The result always lies inside the bracket and
/// satisfies |f(x)| <= abs_tol or is within abs_tol of a sign change.
template<class F>
double find_root(F&& f, double a, double b, ToleranceSpec const& tol = ToleranceSpec::root())
{
    tol.validate();
    if (a > b)
        std::swap(a, b);
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0)
        return a;
    if (fb == 0.0)
        return b;
    if (std::signbit(fa) == std::signbit(fb))
        throw PreconditionError("find_root: f(a) and f(b) have the same sign on ["
                                + std::to_string(a) + ", " + std::to_string(b) + "]");

    constexpr double eps = std::numeric_limits<double>::epsilon();
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (long iter = 0; iter < tol.max_steps; ++iter)
    {
        if (std::signbit(fb) == std::signbit(fc))
        {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb))
        {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        double const tol1 = 2.0 * eps * std::abs(b) + 0.5 * tol.abs_tol;
        double const xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0)
            return b;

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb))
        {
            double p, q, r;
            double const s = fb / fa;
            if (a == c)
            {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            }
            else
            {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0)
                q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q)))
            {
                e = d;
                d = p / q;
            }
            else
            {
                d = xm;
                e = d;
            }
        }
        else
        {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
    }
    throw ConvergenceError("find_root: exceeded max_steps", {b}, b, std::abs(c - b));
}

}  // namespace hillstat::numerics
