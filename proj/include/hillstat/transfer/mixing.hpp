// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <vector>

#include "hillstat/errors.hpp"
#include "hillstat/maps/rational.hpp"

namespace hillstat::transfer {

using maps::Rational;

/// Closed interval with exact rational endpoints.
struct RationalInterval
{
    Rational lo;
    Rational hi;

    Rational length() const { return hi - lo; }
    friend bool operator==(RationalInterval const& a, RationalInterval const& b)
    {
        return a.lo == b.lo && a.hi == b.hi;
    }
};

namespace detail {

inline void merge_touching(std::vector<RationalInterval>& v)
{
    std::sort(v.begin(), v.end(), [](auto const& a, auto const& b) { return a.lo < b.lo; });
    std::vector<RationalInterval> out;
    for (auto const& iv : v)
    {
        if (!out.empty() && iv.lo <= out.back().hi)
            out.back().hi = std::max(out.back().hi, iv.hi);
        else
            out.push_back(iv);
    }
    v = std::move(out);
}

inline void check_unit(RationalInterval const& t, char const* who)
{
    if (t.lo < Rational(0) || t.hi > Rational(1) || t.hi < t.lo)
        throw DomainError(std::string(who) + ": interval must satisfy 0 <= lo <= hi <= 1");
}

}  // namespace detail

/// g_m^{-n}(target) as sorted disjoint intervals, pulled back one branch at a
/// time in exact arithmetic. Adjacent pieces are merged.
inline std::vector<RationalInterval> preimage_intervals(int m, int n, RationalInterval target)
{
    if (m < 1 || n < 0)
        throw DomainError("preimage_intervals: need m >= 1 and n >= 0");
    detail::check_unit(target, "preimage_intervals");
    std::vector<RationalInterval> cur{target};
    Rational const rm(m);
    for (int step = 0; step < n; ++step)
    {
        std::vector<RationalInterval> next;
        next.reserve(cur.size() * static_cast<std::size_t>(m));
        for (auto const& iv : cur)
            for (int j = 0; j < m; ++j)
            {
                if (j % 2 == 0)
                    next.push_back({(iv.lo + Rational(j)) / rm, (iv.hi + Rational(j)) / rm});
                else
                    next.push_back({(Rational(j + 1) - iv.hi) / rm, (Rational(j + 1) - iv.lo) / rm});
            }
        detail::merge_touching(next);
        cur = std::move(next);
    }
    return cur;
}

inline Rational measure(std::vector<RationalInterval> const& v)
{
    Rational s(0);
    for (auto const& iv : v)
        s += iv.length();
    return s;
}

/// Lebesgue measure of g_m^{-n}(A) intersected with B, minus |A| |B|.
inline Rational mixing_correlation(int m, int n, RationalInterval A, RationalInterval B)
{
    detail::check_unit(B, "mixing_correlation");
    auto const pre = preimage_intervals(m, n, A);
    Rational overlap(0);
    for (auto const& iv : pre)
    {
        Rational const lo = std::max(iv.lo, B.lo);
        Rational const hi = std::min(iv.hi, B.hi);
        if (lo < hi)
            overlap += hi - lo;
    }
    return overlap - A.length() * B.length();
}

}  // namespace hillstat::transfer
