// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hillstat/lyapunov/lyapunov.hpp"
#include "hillstat/maps/polynomial.hpp"

using namespace hillstat;
using namespace hillstat::lyapunov;
using hillstat::maps::MapDescriptor;
using std::numbers::pi;

namespace {

// Composite Simpson rule for I(a), valid when |a| > 2 (smooth integrand).
double simpson_I(double a, int n = 20000)
{
    double const lo = -pi / 2, hi = pi / 2, h = (hi - lo) / n;
    auto f = [a](double y) { return std::log(std::abs(2.0 * std::sin(y) - a)); };
    double s = f(lo) + f(hi);
    for (int i = 1; i < n; ++i)
        s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0 / pi;
}

}  // namespace

TEST(LocalLyapunov, Examples)
{
    EXPECT_NEAR(local_lyapunov(MapDescriptor::tent(3), 0.1), std::log(3.0), 1e-15);
    EXPECT_NEAR(local_lyapunov(MapDescriptor::gen_logistic(2), 1.0), std::log(2.0), 1e-15);
    EXPECT_THROW(local_lyapunov(MapDescriptor::gen_logistic(2), 0.0), SingularityError);
    EXPECT_THROW(local_lyapunov(MapDescriptor::tent(3), 1.0 / 3.0), SingularityError);
    EXPECT_THROW(local_lyapunov(MapDescriptor::gen_logistic(3), 1.0), SingularityError);
}

TEST(LyapunovQuadrature, EqualsLogM)
{
    for (int m = 2; m <= 7; ++m)
    {
        auto const r = average_lyapunov_quadrature(m);
        EXPECT_EQ(r.method, Method::quadrature);
        EXPECT_NEAR(r.value, std::log(static_cast<double>(m)), 1e-4) << "m=" << m;
        EXPECT_GE(r.error_estimate, 0.0);
    }
    EXPECT_THROW(average_lyapunov_quadrature(1), DomainError);
}

TEST(LyapunovTent, PiecewiseExact)
{
    auto const r = lyapunov_tent(4);
    EXPECT_EQ(r.method, Method::piecewise_exact);
    EXPECT_EQ(r.value, std::log(4.0));
}

TEST(LyapunovOrbit, LongOrbitMatchesLog2)
{
    auto const r = average_lyapunov_orbit(2, 0.123456, 1'000'000);
    EXPECT_EQ(r.method, Method::orbit_average);
    EXPECT_GT(r.error_estimate, 0.0);
    EXPECT_LT(std::abs(r.value - std::log(2.0)), 3.0 * r.error_estimate)
        << "value=" << r.value << " se=" << r.error_estimate;
}

TEST(LyapunovOrbit, ShortOrbitHasLargeError)
{
    auto const r = average_lyapunov_orbit(3, 0.3, 10);
    EXPECT_TRUE(std::isfinite(r.value));
    EXPECT_TRUE(std::isfinite(r.error_estimate));
    EXPECT_GT(r.error_estimate, 0.05);
}

TEST(LyapunovOrbit, CriticalStartIsRestarted)
{
    auto const r = average_lyapunov_orbit(2, 0.0, 1000);
    EXPECT_GE(r.restarts, 1);
    EXPECT_TRUE(std::isfinite(r.value));
    EXPECT_THROW(average_lyapunov_orbit(2, 2.0, 10), DomainError);
    EXPECT_THROW(average_lyapunov_orbit(2, 0.1, 0), PreconditionError);
}

TEST(LyapunovOrbit, AgreesWithQuadrature)
{
    for (int m : {2, 3, 4})
    {
        auto const q = average_lyapunov_quadrature(m);
        auto const o = average_lyapunov_orbit(m, 0.377, 400'000);
        double const se = std::hypot(q.error_estimate, o.error_estimate);
        EXPECT_LT(std::abs(q.value - o.value), 3.0 * se) << "m=" << m;
    }
}

TEST(RootsFm, Examples)
{
    auto r2 = roots_fm(2);
    ASSERT_EQ(r2.size(), 2u);
    EXPECT_NEAR(r2[0], -std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(r2[1], std::sqrt(2.0), 1e-15);
    auto r3 = roots_fm(3);
    ASSERT_EQ(r3.size(), 3u);
    EXPECT_NEAR(r3[0], -std::sqrt(3.0), 1e-15);
    EXPECT_EQ(r3[1], 0.0);
    EXPECT_NEAR(r3[2], std::sqrt(3.0), 1e-15);
    EXPECT_EQ(roots_fm(1), std::vector<double>{0.0});
}

TEST(RootsFm, SortedWithSmallResiduals)
{
    for (int m = 1; m <= 12; ++m)
    {
        auto const roots = roots_fm(m);
        ASSERT_EQ(static_cast<int>(roots.size()), m);
        auto const p = maps::gen_logistic_coeffs(m);
        for (std::size_t i = 0; i < roots.size(); ++i)
        {
            EXPECT_LT(std::abs(p(roots[i])), 1e-9) << "m=" << m;
            if (i > 0)
            {
                EXPECT_LT(roots[i - 1], roots[i]);
            }
        }
    }
}

TEST(CriticalPoints, ZerosOfDerivative)
{
    for (int m = 2; m <= 9; ++m)
    {
        auto const cps = critical_points_fm(m);
        ASSERT_EQ(static_cast<int>(cps.size()), m - 1);
        auto const dp = maps::gen_logistic_coeffs(m).derivative();
        for (double c : cps)
            EXPECT_LT(std::abs(dp(c)), 1e-9) << "m=" << m;
    }
}

TEST(IIntegral, Examples)
{
    EXPECT_NEAR(I_integral(0.0), 0.0, 1e-6);
    EXPECT_NEAR(I_integral(1.0), 0.0, 1e-6);
    EXPECT_NEAR(I_integral(-1.0), 0.0, 1e-6);
    double const oracle = simpson_I(3.0);
    EXPECT_NEAR(oracle, std::log((3.0 + std::sqrt(5.0)) / 2.0), 1e-10);
    EXPECT_NEAR(I_integral(3.0), oracle, 1e-6);
    EXPECT_NEAR(I_integral(3.0), 0.9624236501192069, 1e-9);
}

TEST(IIntegral, Even)
{
    for (double a : {0.5, 1.0, 1.5, 3.0})
        EXPECT_NEAR(I_integral(a), I_integral(-a), 1e-8) << "a=" << a;
}

TEST(IIntegral, VanishesOnBand)
{
    for (int i = 0; i <= 40; ++i)
    {
        double const a = -1.9 + 3.8 * i / 40.0;
        EXPECT_LT(std::abs(I_integral(a)), 1e-6) << "a=" << a;
    }
    EXPECT_LT(std::abs(I_integral(2.0)), 1e-6);
    EXPECT_LT(std::abs(I_integral(-2.0)), 1e-6);
}

TEST(IIntegral, OutsideBandMatchesOracle)
{
    for (double a : {2.5, 4.0, -6.0})
        EXPECT_NEAR(I_integral(a), simpson_I(a), 1e-8) << "a=" << a;
}

TEST(Decomposition, MatchesQuadrature)
{
    for (int m = 2; m <= 7; ++m)
    {
        double const q = average_lyapunov_quadrature(m).value;
        EXPECT_NEAR(lyapunov_decomposition(m, roots_fm(m)), q, 2e-4) << "m=" << m;
        EXPECT_NEAR(lyapunov_decomposition(m, critical_points_fm(m)), q, 2e-4) << "m=" << m;
    }
}

TEST(ISweep, Grid)
{
    auto const s = I_sweep(-3.0, 3.0, 7);
    ASSERT_EQ(s.size(), 7u);
    EXPECT_DOUBLE_EQ(s.front().a, -3.0);
    EXPECT_DOUBLE_EQ(s.back().a, 3.0);
    EXPECT_NEAR(s[3].value, 0.0, 1e-6);
    EXPECT_NEAR(s[0].value, s[6].value, 1e-8);
}
