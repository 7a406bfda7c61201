// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "hillstat/errors.hpp"
#include "hillstat/numerics/tolerance.hpp"

namespace hillstat::numerics {

template<std::size_t N>
using State = std::array<double, N>;

namespace detail {

// Dormand-Prince 5(4) tableau.
struct DormandPrince
{
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - b_hat (difference between the 5th and embedded 4th order weights)
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
};

template<std::size_t N>
inline State<N> axpy(State<N> const& y, double h,
                     std::initializer_list<std::pair<double, State<N> const*>> terms)
{
    State<N> out = y;
    for (auto const& [c, k] : terms)
        for (std::size_t i = 0; i < N; ++i)
            out[i] += h * c * (*k)[i];
    return out;
}

}  // namespace detail

/// Integrates y' = rhs(t, y) from t0 to t1 with an adaptive Dormand-Prince
/// 5(4) pair.
///
/// Local errors are controlled per unit length (a step of size h may commit
/// at most tol * h / |t1 - t0|), so the accumulated error on non-expanding
/// problems stays within tol. Steps never straddle a declared breakpoint:
/// each breakpoint strictly inside (t0, t1) starts a fresh segment.
///
/// Throws ConvergenceError (carrying the last accepted state) when more than
/// tol.max_steps steps would be needed.
template<std::size_t N, class Rhs>
State<N> integrate_ivp(Rhs&& rhs,
                       State<N> y,
                       double t0,
                       double t1,
                       ToleranceSpec const& tol = ToleranceSpec::integrator(),
                       std::span<double const> breakpoints = {})
{
    using T = detail::DormandPrince;
    tol.validate();
    if (!(t0 <= t1))
        throw PreconditionError("integrate_ivp: requires t0 <= t1");
    if (t0 == t1)
        return y;

    std::vector<double> nodes{t0};
    {
        std::vector<double> inner;
        for (double b : breakpoints)
            if (b > t0 && b < t1)
                inner.push_back(b);
        std::sort(inner.begin(), inner.end());
        inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
        nodes.insert(nodes.end(), inner.begin(), inner.end());
    }
    nodes.push_back(t1);

    double const span = t1 - t0;
    long steps = 0;
    double h = std::min(span, 0.05);

    for (std::size_t seg = 0; seg + 1 < nodes.size(); ++seg)
    {
        double t = nodes[seg];
        double const end = nodes[seg + 1];
        // A right-hand side may jump at a breakpoint, so stages that land on
        // one are evaluated just inside the current segment.
        double const inner_lo = seg > 0 ? std::nextafter(t, end) : t;
        double const inner_hi = seg + 2 < nodes.size() ? std::nextafter(end, t) : end;
        auto f = [&](double s, State<N> const& v) {
            return rhs(std::clamp(s, inner_lo, inner_hi), v);
        };
        State<N> k1 = f(t, y);
        while (t < end)
        {
            bool last = false;
            double const h_try = h;
            if (t + h >= end)
            {
                h = end - t;
                last = true;
            }
            if (++steps > tol.max_steps)
                throw ConvergenceError("integrate_ivp: exceeded max_steps",
                                       std::vector<double>(y.begin(), y.end()));

            State<N> k2 = f(t + T::c2 * h, detail::axpy<N>(y, h, {{T::a21, &k1}}));
            State<N> k3 = f(t + T::c3 * h,
                              detail::axpy<N>(y, h, {{T::a31, &k1}, {T::a32, &k2}}));
            State<N> k4 = f(t + T::c4 * h,
                              detail::axpy<N>(y, h, {{T::a41, &k1}, {T::a42, &k2}, {T::a43, &k3}}));
            State<N> k5 = f(t + T::c5 * h,
                              detail::axpy<N>(y, h,
                                              {{T::a51, &k1}, {T::a52, &k2}, {T::a53, &k3}, {T::a54, &k4}}));
            State<N> k6 = f(t + h,
                              detail::axpy<N>(y, h,
                                              {{T::a61, &k1}, {T::a62, &k2}, {T::a63, &k3},
                                               {T::a64, &k4}, {T::a65, &k5}}));
            State<N> ynew = detail::axpy<N>(
                y, h, {{T::b1, &k1}, {T::b3, &k3}, {T::b4, &k4}, {T::b5, &k5}, {T::b6, &k6}});
            State<N> k7 = f(t + h, ynew);

            double err = 0.0;
            for (std::size_t i = 0; i < N; ++i)
            {
                double const e = h
                                 * (T::e1 * k1[i] + T::e3 * k3[i] + T::e4 * k4[i]
                                    + T::e5 * k5[i] + T::e6 * k6[i] + T::e7 * k7[i]);
                double const scale
                    = (tol.abs_tol + tol.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i])))
                      * (h / span);
                err = std::max(err, std::abs(e) / scale);
            }

            if (err <= 1.0)
            {
                t = last ? end : t + h;
                y = ynew;
                k1 = k7;
                double const grow = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
                h = last ? std::max(h_try, h) : h * grow;
            }
            else
            {
                h *= std::max(0.2, 0.9 * std::pow(err, -0.25));
            }
        }
    }
    return y;
}

}  // namespace hillstat::numerics
