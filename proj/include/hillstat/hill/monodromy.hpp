// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "hillstat/errors.hpp"
#include "hillstat/hill/potential.hpp"
#include "hillstat/numerics/ode.hpp"
#include "hillstat/numerics/tolerance.hpp"

namespace hillstat::hill {

using numerics::ToleranceSpec;

/// Transfer matrix of u'' = (V - lambda) u across one cell of length
/// cell_length, in the basis of the solutions phi (phi(0)=1, phi'(0)=0) and
/// psi (psi(0)=0, psi'(0)=1):
///
///   [ phi(l)   psi(l)  ]
///   [ phi'(l)  psi'(l) ]
struct Monodromy
{
    double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;
    double cell_length = 0.0;
    double lambda = 0.0;

    static Monodromy identity(double cell_length = 0.0, double lambda = 0.0)
    {
        return {1.0, 0.0, 0.0, 1.0, cell_length, lambda};
    }

    double det() const noexcept { return m11 * m22 - m12 * m21; }
    double trace() const noexcept { return m11 + m22; }
};

/// Matrix product a * b. The transfer matrix over [0, k + l] of a potential
/// whose period divides both k and l is the product of the two cell matrices.
inline Monodromy operator*(Monodromy const& a, Monodromy const& b)
{
    return {a.m11 * b.m11 + a.m12 * b.m21,
            a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21,
            a.m21 * b.m12 + a.m22 * b.m22,
            a.cell_length + b.cell_length,
            a.lambda};
}

namespace detail {

inline void check_cell(Potential const& V, double l)
{
    if (!(l > 0.0) || !std::isfinite(l))
        throw PreconditionError("monodromy: cell length must be positive");
    double const cells = l / V.period();
    if (std::abs(cells - std::round(cells)) > 1e-9 * std::max(1.0, cells) || std::round(cells) < 1.0)
        throw PreconditionError("monodromy: cell length " + std::to_string(l)
                                + " is not a positive integer multiple of the period "
                                + std::to_string(V.period()));
}

}  // namespace detail

/// Integrates both basis solutions over [0, l].
inline Monodromy monodromy(Potential const& V,
                           double l,
                           double lambda,
                           ToleranceSpec const& tol = ToleranceSpec::integrator())
{
    detail::check_cell(V, l);
    auto rhs = [&](double x, numerics::State<4> const& y) {
        double const q = V(x) - lambda;
        return numerics::State<4>{y[1], q * y[0], y[3], q * y[2]};
    };
    auto const kinks = V.kinks(0.0, l);
    auto const y = numerics::integrate_ivp<4>(rhs, {1.0, 0.0, 0.0, 1.0}, 0.0, l, tol, kinks);
    return {y[0], y[2], y[1], y[3], l, lambda};
}

/// M^m by binary exponentiation of the stored entries.
inline Monodromy monodromy_power(Monodromy const& M, long m)
{
    if (m < 1)
        throw PreconditionError("monodromy_power: exponent must be >= 1");
    Monodromy result = Monodromy::identity(0.0, M.lambda);
    Monodromy base = M;
    bool first = true;
    while (m > 0)
    {
        if (m & 1)
        {
            result = first ? base : result * base;
            first = false;
        }
        m >>= 1;
        if (m > 0)
            base = base * base;
    }
    return result;
}

inline double discriminant(Monodromy const& M) noexcept
{
    return M.trace();
}

/// Value of the discriminant together with its derivative in lambda.
struct DiscriminantSample
{
    double value;
    double derivative;
};

/// Integrates the basis solutions and their lambda-derivatives, which obey
/// w'' = (V - lambda) w - u with zero initial data.
inline DiscriminantSample discriminant_with_derivative(
    Potential const& V, double l, double lambda, ToleranceSpec const& tol = ToleranceSpec::integrator())
{
    detail::check_cell(V, l);
    auto rhs = [&](double x, numerics::State<8> const& y) {
        double const q = V(x) - lambda;
        return numerics::State<8>{y[1], q * y[0],        y[3], q * y[2],
                                  y[5], q * y[4] - y[0], y[7], q * y[6] - y[2]};
    };
    auto const kinks = V.kinks(0.0, l);
    auto const y = numerics::integrate_ivp<8>(rhs, {1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0}, 0.0,
                                              l, tol, kinks);
    return {y[0] + y[3], y[4] + y[7]};
}

enum class EigenvalueClass
{
    elliptic,
    parabolic,
    hyperbolic
};

inline char const* to_string(EigenvalueClass c) noexcept
{
    switch (c)
    {
        case EigenvalueClass::elliptic: return "elliptic";
        case EigenvalueClass::parabolic: return "parabolic";
        case EigenvalueClass::hyperbolic: return "hyperbolic";
    }
    return "?";
}

/// Classifies the eigenvalues of a unimodular matrix from its trace.
inline EigenvalueClass eigenvalue_class(double delta) noexcept
{
    double const gap = std::abs(delta) - 2.0;
    if (std::abs(gap) <= 1e-12)
        return EigenvalueClass::parabolic;
    return gap < 0.0 ? EigenvalueClass::elliptic : EigenvalueClass::hyperbolic;
}

/// Density of the arcsine law on (-2, 2).
inline double discriminant_density(double delta)
{
    if (!(std::abs(delta) < 2.0))
        throw DomainError("discriminant_density: requires |delta| < 2, got " + std::to_string(delta));
    return 1.0 / (std::numbers::pi * std::sqrt((2.0 - delta) * (2.0 + delta)));
}

/// Closed-form discriminant of the free operator on a cell of length l.
inline double free_discriminant(double l, double lambda)
{
    if (lambda >= 0.0)
        return 2.0 * std::cos(l * std::sqrt(lambda));
    return 2.0 * std::cosh(l * std::sqrt(-lambda));
}

}  // namespace hillstat::hill
