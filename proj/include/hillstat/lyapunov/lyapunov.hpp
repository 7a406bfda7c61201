// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "hillstat/errors.hpp"
#include "hillstat/maps/map.hpp"
#include "hillstat/numerics/quadrature.hpp"
#include "hillstat/transfer/density.hpp"

namespace hillstat::lyapunov {

using maps::MapDescriptor;
using numerics::ToleranceSpec;

enum class Method
{
    quadrature,
    orbit_average,
    piecewise_exact
};

inline char const* to_string(Method m) noexcept
{
    switch (m)
    {
        case Method::quadrature: return "quadrature";
        case Method::orbit_average: return "orbit_average";
        case Method::piecewise_exact: return "piecewise_exact";
    }
    return "?";
}

struct LyapunovResult
{
    int m;
    double value;
    Method method;
    double error_estimate;
    /// Orbit estimator only: perturbations applied after landing on a
    /// critical point or on the fixed boundary points.
    long restarts = 0;
};

/// Raised at points where log|f'| is undefined.
class SingularityError : public DomainError
{
  public:
    using DomainError::DomainError;
};

namespace detail {

// |f'| below this counts as a critical point (f_m' is of size m^2 on [-2, 2]).
inline double critical_threshold(int m)
{
    return 64.0 * std::numeric_limits<double>::epsilon() * m * m;
}

}  // namespace detail

/// log|f'(x)|.
inline double local_lyapunov(MapDescriptor const& map, double x)
{
    double d;
    try
    {
        d = maps::eval_derivative(map, x);
    }
    catch (DomainError const& e)
    {
        if (map.domain().contains(x))
            throw SingularityError(std::string("local_lyapunov: ") + e.what());
        throw;
    }
    if (std::abs(d) <= detail::critical_threshold(map.degree()))
        throw SingularityError("local_lyapunov: x=" + std::to_string(x) + " is a critical point of "
                               + map.name());
    return std::log(std::abs(d));
}

/// Critical points 2 cos(j pi / m), j = 1..m-1, ascending.
inline std::vector<double> critical_points_fm(int m)
{
    std::vector<double> out;
    for (int j = m - 1; j >= 1; --j)
        out.push_back(2 * j == m ? 0.0 : 2.0 * std::cos(j * std::numbers::pi / m));
    return out;
}

/// Roots 2 cos((2j+1) pi / (2m)), j = 0..m-1, ascending.
inline std::vector<double> roots_fm(int m)
{
    if (m < 1)
        throw DomainError("roots_fm: m must be >= 1");
    std::vector<double> out;
    for (int j = m - 1; j >= 0; --j)
        out.push_back(2 * j + 1 == m ? 0.0 : 2.0 * std::cos((2 * j + 1) * std::numbers::pi / (2.0 * m)));
    return out;
}

/// Integral of log|f_m'| against the invariant density D.
inline LyapunovResult average_lyapunov_quadrature(int m, ToleranceSpec const& tol = ToleranceSpec::quadrature())
{
    if (m < 2)
        throw DomainError("average_lyapunov_quadrature: m must be >= 2");
    auto const map = MapDescriptor::gen_logistic(m);
    auto const& dp = map.derivative_polynomial();
    std::vector<double> sing = critical_points_fm(m);
    sing.push_back(-2.0);
    sing.push_back(2.0);
    auto integrand = [&](double x) {
        return std::log(std::abs(dp(x))) / (std::numbers::pi * std::sqrt((2.0 - x) * (2.0 + x)));
    };
    auto const r = numerics::integrate_singular(integrand, -2.0, 2.0, sing, tol);
    return {m, r.value, Method::quadrature, r.error};
}

/// Exponent of the tent map: |g_m'| = m everywhere off the breakpoints.
inline LyapunovResult lyapunov_tent(int m)
{
    if (m < 1)
        throw DomainError("lyapunov_tent: m must be >= 1");
    return {m, std::log(static_cast<double>(m)), Method::piecewise_exact, 0.0};
}

/// Birkhoff average of log|f_m'| along the orbit of x0.
///
/// The first burn_in iterates are discarded. Landing on a critical point or
/// on the fixed points +-2 would pin the orbit, so the iterate is nudged by
/// 1e-9 towards the interior and the event counted in `restarts`.
/// error_estimate is the batch-means standard error (up to 100 batches),
/// or the plain sample standard error for orbits shorter than 20.
inline LyapunovResult average_lyapunov_orbit(int m, double x0, long n, long burn_in = 100)
{
    if (m < 2)
        throw DomainError("average_lyapunov_orbit: m must be >= 2");
    if (n < 1)
        throw PreconditionError("average_lyapunov_orbit: n must be >= 1");
    if (!(x0 > -2.0 && x0 < 2.0))
        throw DomainError("average_lyapunov_orbit: x0 must lie in (-2, 2)");
    auto const map = MapDescriptor::gen_logistic(m);
    auto const& p = map.polynomial();
    auto const& dp = map.derivative_polynomial();
    double const thr = detail::critical_threshold(m);
    long restarts = 0;

    auto settle = [&](double& x) {
        x = std::clamp(x, -2.0, 2.0);
        while (std::abs(x) == 2.0 || std::abs(dp(x)) <= thr)
        {
            x = x > 0.0 ? x - 1e-9 : x + 1e-9;
            ++restarts;
        }
    };

    double x = x0;
    settle(x);
    for (long i = 0; i < burn_in; ++i)
    {
        x = p(x);
        settle(x);
    }

    long const batches = std::clamp(n / 10, 1L, 100L);
    long const per = n / batches;
    std::vector<double> means;
    double total = 0.0;
    double total_sq = 0.0;
    long count = 0;
    double batch = 0.0;
    long in_batch = 0;
    for (long i = 0; i < n; ++i)
    {
        double const v = std::log(std::abs(dp(x)));
        total += v;
        total_sq += v * v;
        ++count;
        batch += v;
        if (++in_batch == per && static_cast<long>(means.size()) < batches)
        {
            means.push_back(batch / static_cast<double>(per));
            batch = 0.0;
            in_batch = 0;
        }
        x = p(x);
        settle(x);
    }
    double const mean = total / static_cast<double>(count);
    double se = std::numeric_limits<double>::infinity();
    if (means.size() < 2 && count >= 2)
    {
        double const c = static_cast<double>(count);
        double const var = std::max(0.0, (total_sq - c * mean * mean) / (c - 1.0));
        se = std::sqrt(var / c);
    }
    else if (means.size() >= 2)
    {
        double const bm = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(means.size());
        double ss = 0.0;
        for (double b : means)
            ss += (b - bm) * (b - bm);
        double const k = static_cast<double>(means.size());
        se = std::sqrt(ss / (k - 1.0) / k);
    }
    LyapunovResult r{m, mean, Method::orbit_average, se};
    r.restarts = restarts;
    return r;
}

/// I(a) = (1/pi) * integral over [-pi/2, pi/2] of log|2 sin y - a| dy.
inline double I_integral(double a, ToleranceSpec const& tol = ToleranceSpec::quadrature())
{
    double const h = std::numbers::pi / 2;
    if (std::abs(a) <= 2.0)
    {
        // 2 sin y - 2 sin s = 4 cos((y+s)/2) sin((y-s)/2), free of cancellation near y = s.
        double const s = std::asin(a / 2.0);
        std::vector<double> const sing{s};
        auto f = [s](double y) {
            return std::log(4.0 * std::abs(std::cos(0.5 * (y + s)) * std::sin(0.5 * (y - s))));
        };
        return numerics::quad_singular(f, -h, h, sing, tol) / std::numbers::pi;
    }
    auto f = [a](double y) { return std::log(std::abs(2.0 * std::sin(y) - a)); };
    return numerics::quad_singular(f, -h, h, {}, tol) / std::numbers::pi;
}

/// log m + sum of I over the given points.
inline double lyapunov_decomposition(int m,
                                     std::vector<double> const& points,
                                     ToleranceSpec const& tol = ToleranceSpec::quadrature())
{
    double s = std::log(static_cast<double>(m));
    for (double a : points)
        s += I_integral(a, tol);
    return s;
}

struct IntegralSample
{
    double a;
    double value;
};

/// I(a) on n equally spaced points of [lo, hi].
inline std::vector<IntegralSample> I_sweep(double lo, double hi, int n,
                                           ToleranceSpec const& tol = ToleranceSpec::quadrature())
{
    if (n < 1)
        throw PreconditionError("I_sweep: need at least one point");
    std::vector<IntegralSample> out;
    for (int i = 0; i < n; ++i)
    {
        double const a = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
        out.push_back({a, I_integral(a, tol)});
    }
    return out;
}

}  // namespace hillstat::lyapunov
