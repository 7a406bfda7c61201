// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "hillstat/errors.hpp"
#include "hillstat/maps/polynomial.hpp"
#include "hillstat/maps/rational.hpp"

namespace hillstat::maps {

struct Interval
{
    double lo;
    double hi;

    bool contains(double x) const noexcept { return x >= lo && x <= hi; }
    double length() const noexcept { return hi - lo; }
};

enum class Family
{
    logistic,
    gen_logistic,
    tent,
    fold,
    chebyshev
};

inline char const* to_string(Family f) noexcept
{
    switch (f)
    {
        case Family::logistic: return "logistic";
        case Family::gen_logistic: return "gen_logistic";
        case Family::tent: return "tent";
        case Family::fold: return "fold";
        case Family::chebyshev: return "chebyshev";
    }
    return "?";
}

/// One of the iterated maps:
///   logistic(r)     F_r(x) = r x (1 - x) on [0, 1]
///   gen_logistic(m) f_m with f_m(2 cos t) = 2 cos(m t) on [-2, 2]
///   tent(m)         g_m, m linear pieces of slope +-m on [0, 1]
///   fold(l)         K_l, the periodic extension of g_l to [0, inf)
///   chebyshev(m)    T_m on [-1, 1]
class MapDescriptor
{
  public:
    static MapDescriptor logistic(double r = 4.0)
    {
        if (!(r > 0.0 && r <= 4.0))
            throw DomainError("logistic map: r must lie in (0, 4]");
        MapDescriptor d(Family::logistic, 2);
        d.r_ = r;
        return d;
    }
    static MapDescriptor gen_logistic(int m)
    {
        MapDescriptor d(Family::gen_logistic, m);
        d.poly_ = gen_logistic_coeffs(m);
        d.dpoly_ = d.poly_.derivative();
        return d;
    }
    static MapDescriptor tent(int m) { return MapDescriptor(Family::tent, m); }
    static MapDescriptor fold(int l) { return MapDescriptor(Family::fold, l); }
    static MapDescriptor chebyshev(int m) { return MapDescriptor(Family::chebyshev, m); }

    Family family() const noexcept { return family_; }
    /// m for gen_logistic/tent/chebyshev, l for fold, 2 for logistic.
    int degree() const noexcept { return m_; }
    double r() const noexcept { return r_; }
    PolynomialCoeffs const& polynomial() const noexcept { return poly_; }
    PolynomialCoeffs const& derivative_polynomial() const noexcept { return dpoly_; }

    Interval domain() const noexcept
    {
        switch (family_)
        {
            case Family::gen_logistic: return {-2.0, 2.0};
            case Family::chebyshev: return {-1.0, 1.0};
            case Family::fold: return {0.0, std::numeric_limits<double>::infinity()};
            default: return {0.0, 1.0};
        }
    }

    std::string name() const
    {
        if (family_ == Family::logistic)
            return "logistic(r=" + std::to_string(r_) + ")";
        return std::string(to_string(family_)) + "(" + std::to_string(m_) + ")";
    }

  private:
    MapDescriptor(Family f, int m)
        : family_(f)
        , m_(m)
    {
        if (m < 1)
            throw DomainError(std::string(to_string(f)) + " map: degree must be >= 1");
    }

    Family family_;
    int m_;
    double r_ = 4.0;
    PolynomialCoeffs poly_;
    PolynomialCoeffs dpoly_;
};

namespace detail {

/// Index of the linear piece of g_m / K_m containing x; breakpoints belong
/// to the left piece.
inline std::int64_t piece_index(double mx) noexcept
{
    double const c = std::ceil(mx) - 1.0;
    return c < 0.0 ? 0 : static_cast<std::int64_t>(c);
}

inline double piecewise_fold(double x, int m) noexcept
{
    double const mx = m * x;
    std::int64_t const p = piece_index(mx);
    return p % 2 == 0 ? mx - static_cast<double>(p) : static_cast<double>(p + 1) - mx;
}

}  // namespace detail

/// Evaluates map at x. Throws DomainError outside the map's domain.
inline double eval_map(MapDescriptor const& map, double x)
{
    if (!map.domain().contains(x))
        throw DomainError("eval_map: x=" + std::to_string(x) + " outside the domain of "
                          + map.name());
    switch (map.family())
    {
        case Family::logistic: return map.r() * x * (1.0 - x);
        case Family::gen_logistic: return map.polynomial()(x);
        case Family::tent:
        case Family::fold: return detail::piecewise_fold(x, map.degree());
        case Family::chebyshev: return chebyshev_t(map.degree(), x);
    }
    return 0.0;
}

/// Exact tent/fold evaluation in rational arithmetic.
inline Rational eval_map(MapDescriptor const& map, Rational x)
{
    if (map.family() != Family::tent && map.family() != Family::fold)
        throw DomainError("eval_map: rational evaluation is only defined for tent and fold maps");
    if (x < Rational(0) || (map.family() == Family::tent && x > Rational(1)))
        throw DomainError("eval_map: x=" + x.str() + " outside the domain of " + map.name());
    Rational const mx = x * Rational(map.degree());
    std::int64_t p = mx.floor();
    if (Rational(p) == mx)
        p -= 1;
    if (p < 0)
        p = 0;
    return p % 2 == 0 ? mx - Rational(p) : Rational(p + 1) - mx;
}

/// Derivative of the map at x. Tent/fold breakpoints have no derivative and
/// are rejected.
inline double eval_derivative(MapDescriptor const& map, double x)
{
    if (!map.domain().contains(x))
        throw DomainError("eval_derivative: x outside the domain of " + map.name());
    switch (map.family())
    {
        case Family::logistic: return map.r() * (1.0 - 2.0 * x);
        case Family::gen_logistic: return map.derivative_polynomial()(x);
        case Family::tent:
        case Family::fold:
        {
            double const mx = map.degree() * x;
            if (mx == std::floor(mx))
                throw DomainError("eval_derivative: x is a breakpoint of " + map.name());
            auto const p = static_cast<std::int64_t>(std::floor(mx));
            return p % 2 == 0 ? map.degree() : -map.degree();
        }
        case Family::chebyshev:
        {
            // T_m' = m U_{m-1}
            int const m = map.degree();
            if (m == 1)
                return 1.0;
            double a = 1.0, b = 2.0 * x;
            for (int k = 2; k < m; ++k)
            {
                double const c = 2.0 * x * b - a;
                a = b;
                b = c;
            }
            return m * b;
        }
    }
    return 0.0;
}

/// Raised when an orbit leaves the map's domain.
class EscapeError : public DomainError
{
  public:
    EscapeError(std::string const& what, long step, double value)
        : DomainError(what)
        , step_(step)
        , value_(value)
    {
    }
    long step() const noexcept { return step_; }
    double value() const noexcept { return value_; }

  private:
    long step_;
    double value_;
};

struct Orbit
{
    MapDescriptor map;
    double x0;
    std::vector<double> values;
};

/// Iterates map n times from x0.
///
/// Polynomial maps on [-2, 2] may round a hair past the endpoints
/// (f_m(2 cos t) = 2 exactly only in exact arithmetic); such values within
/// 64 ulp of the boundary are pulled back onto it. Anything further out is an
/// escape.
inline Orbit iterate(MapDescriptor const& map, double x0, long n)
{
    if (n < 0)
        throw PreconditionError("iterate: n must be nonnegative");
    Interval const dom = map.domain();
    if (!dom.contains(x0))
        throw DomainError("iterate: x0=" + std::to_string(x0) + " outside the domain of "
                          + map.name());
    Orbit orbit{map, x0, {}};
    orbit.values.reserve(static_cast<std::size_t>(n) + 1);
    orbit.values.push_back(x0);
    double const slack = 64.0 * std::numeric_limits<double>::epsilon()
                         * std::max(std::abs(dom.lo), std::isfinite(dom.hi) ? std::abs(dom.hi) : 1.0);
    double x = x0;
    for (long i = 1; i <= n; ++i)
    {
        x = eval_map(map, x);
        if (!dom.contains(x))
        {
            if (x < dom.lo && x >= dom.lo - slack)
                x = dom.lo;
            else if (x > dom.hi && x <= dom.hi + slack)
                x = dom.hi;
            else
                throw EscapeError("iterate: orbit of " + map.name() + " from x0="
                                      + std::to_string(x0) + " left the domain at step "
                                      + std::to_string(i),
                                  i, x);
        }
        orbit.values.push_back(x);
    }
    return orbit;
}

/// C(x) = 2 cos(pi x), conjugating g_m on [0, 1] to f_m on [-2, 2].
inline double conj_cosine(double x)
{
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("conj_cosine: x must lie in [0, 1]");
    return 2.0 * std::cos(std::numbers::pi * x);
}

inline double conj_cosine_inv(double delta)
{
    if (!(delta >= -2.0 && delta <= 2.0))
        throw DomainError("conj_cosine_inv: delta must lie in [-2, 2]");
    return std::acos(delta / 2.0) / std::numbers::pi;
}

/// x = (2 - delta) / 4, conjugating f_2 on [-2, 2] to the logistic map F_4.
inline double conj_mandelbrot(double delta) noexcept
{
    return (2.0 - delta) / 4.0;
}

inline double conj_mandelbrot_inv(double x) noexcept
{
    return 2.0 - 4.0 * x;
}

/// Closed-form n-th iterate of the logistic map F_4 from x0.
inline double sine_formula(double x0, long n)
{
    if (!(x0 >= 0.0 && x0 <= 1.0))
        throw DomainError("sine_formula: x0 must lie in [0, 1]");
    if (n < 0)
        throw PreconditionError("sine_formula: n must be nonnegative");
    double const s = std::sin(std::ldexp(std::asin(std::sqrt(x0)), static_cast<int>(n)));
    return s * s;
}

}  // namespace hillstat::maps
