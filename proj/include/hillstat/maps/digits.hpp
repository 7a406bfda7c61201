// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "hillstat/errors.hpp"
#include "hillstat/maps/rational.hpp"

namespace hillstat::maps {

namespace detail {

inline void check_base(int m)
{
    if (m < 2)
        throw DomainError("m-ary digits: base must be >= 2");
}

}  // namespace detail

/// First `count` digits of the base-m expansion of x in [0, 1).
///
/// Greedy extraction. The rounding error of x grows by a factor m per digit;
/// a product within that error below the next integer is rounded up, so
/// values like 5/9 yield the terminating expansion.
inline std::vector<int> mary_digits(double x, int m, int count)
{
    detail::check_base(m);
    if (!(x >= 0.0 && x < 1.0))
        throw DomainError("mary_digits: x must lie in [0, 1)");
    double const eps = std::numeric_limits<double>::epsilon();
    double err = 2.0 * eps;
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i)
    {
        double const y = x * m;
        err = err * m + eps * m;
        double d = std::floor(y);
        if (y - d > 1.0 - err)
            d += 1.0;
        if (d > m - 1)
            d = m - 1;
        out.push_back(static_cast<int>(d));
        x = std::max(0.0, y - d);
    }
    return out;
}

/// Exact digits for rational x in [0, 1).
inline std::vector<int> mary_digits(Rational x, int m, int count)
{
    detail::check_base(m);
    if (x < Rational(0) || x >= Rational(1))
        throw DomainError("mary_digits: x must lie in [0, 1)");
    std::vector<int> out;
    for (int i = 0; i < count; ++i)
    {
        Rational const y = x * Rational(m);
        std::int64_t const d = y.floor();
        out.push_back(static_cast<int>(d));
        x = y - Rational(d);
    }
    return out;
}

/// Digits of g_m(x) predicted from the digits of x: drop the first digit and
/// reflect the rest (a -> m-1-a) when the dropped digit is odd.
inline std::vector<int> digit_shift_predict(std::vector<int> const& digits, int m)
{
    detail::check_base(m);
    for (int d : digits)
        if (d < 0 || d >= m)
            throw DomainError("digit_shift_predict: digit out of range for base m");
    if (digits.empty())
        return {};
    bool const flip = digits.front() % 2 == 1;
    std::vector<int> out(digits.begin() + 1, digits.end());
    if (flip)
        for (int& d : out)
            d = m - 1 - d;
    return out;
}

}  // namespace hillstat::maps
