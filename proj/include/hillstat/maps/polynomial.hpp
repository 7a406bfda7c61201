// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hillstat/errors.hpp"

namespace hillstat::maps {

/// Real polynomial, coefficients listed from the highest degree down.
struct PolynomialCoeffs
{
    std::vector<double> coefficients;

    int degree() const noexcept { return static_cast<int>(coefficients.size()) - 1; }

    double operator()(double x) const noexcept
    {
        double acc = 0.0;
        for (double c : coefficients)
            acc = acc * x + c;
        return acc;
    }

    PolynomialCoeffs derivative() const
    {
        PolynomialCoeffs d;
        int const n = degree();
        if (n <= 0)
            return {{0.0}};
        for (int i = 0; i < n; ++i)
            d.coefficients.push_back(coefficients[static_cast<std::size_t>(i)] * (n - i));
        return d;
    }
};

/// Integer coefficients of f_m, highest degree first, from
/// p_0 = 2, p_1 = x, p_{k+1} = x p_k - p_{k-1}.
inline std::vector<std::int64_t> gen_logistic_coeffs_exact(int m)
{
    if (m < 1)
        throw DomainError("gen_logistic_coeffs: m must be >= 1");
    // Stored lowest degree first while building.
    std::vector<std::int64_t> prev{2}, cur{0, 1};
    for (int k = 1; k < m; ++k)
    {
        std::vector<std::int64_t> next(cur.size() + 1, 0);
        for (std::size_t i = 0; i < cur.size(); ++i)
            next[i + 1] = cur[i];
        for (std::size_t i = 0; i < prev.size(); ++i)
            if (__builtin_sub_overflow(next[i], prev[i], &next[i]))
                throw DomainError("gen_logistic_coeffs: coefficients overflow 64 bits for m="
                                  + std::to_string(m));
        prev = std::move(cur);
        cur = std::move(next);
    }
    return {cur.rbegin(), cur.rend()};
}

inline PolynomialCoeffs gen_logistic_coeffs(int m)
{
    auto const exact = gen_logistic_coeffs_exact(m);
    PolynomialCoeffs p;
    p.coefficients.reserve(exact.size());
    for (auto c : exact)
        p.coefficients.push_back(static_cast<double>(c));
    return p;
}

/// Chebyshev polynomial of the first kind by the three-term recurrence.
inline double chebyshev_t(int m, double x) noexcept
{
    if (m == 0)
        return 1.0;
    double a = 1.0, b = x;
    for (int k = 1; k < m; ++k)
    {
        double const c = 2.0 * x * b - a;
        a = b;
        b = c;
    }
    return b;
}

}  // namespace hillstat::maps
