// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "hillstat/ensemble/ensemble.hpp"
#include "hillstat/transfer/pushforward.hpp"

using namespace hillstat;
using namespace hillstat::ensemble;
using std::numbers::pi;

TEST(SampleInitial, GoldenUniform)
{
    auto const s = sample_initial(InitialDistribution::uniform(-2.0, 2.0), 4, 20260101);
    std::ifstream in(std::string(HILLSTAT_TEST_DATA_DIR) + "/ensemble_uniform_n4.txt");
    ASSERT_TRUE(in) << "missing golden file";
    std::vector<double> golden;
    for (std::string line; std::getline(in, line);)
        if (!line.empty() && line[0] != '#')
            golden.push_back(std::stod(line));
    ASSERT_EQ(golden.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i)
        EXPECT_EQ(s.values[i], golden[i]) << i;
}

TEST(SampleInitial, DeterministicAcrossThreads)
{
    auto const d = InitialDistribution::shifted_gamma(1.0, 1.0, -2.0);
    auto const a = sample_initial(d, 300'000, 7, 1);
    auto const b = sample_initial(d, 300'000, 7, 4);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.rejected, b.rejected);
    auto const c = sample_initial(d, 300'000, 8, 1);
    EXPECT_NE(a.values, c.values);
}

TEST(SampleInitial, GammaRejectionFraction)
{
    auto const s = sample_initial(InitialDistribution::shifted_gamma(1.0, 1.0, -2.0), 1'000'000, 42);
    double const frac = static_cast<double>(s.rejected) / static_cast<double>(s.drawn);
    double const expect = std::exp(-4.0);
    double const se = std::sqrt(expect * (1 - expect) / static_cast<double>(s.drawn));
    EXPECT_NEAR(frac, expect, 5 * se);
    for (double v : s.values)
        ASSERT_TRUE(v >= -2.0 && v <= 2.0);
}

TEST(SampleInitial, SingleSampleAndErrors)
{
    for (auto const& d : {InitialDistribution::uniform(-2.0, 2.0), InitialDistribution::shifted_gamma(1, 1, -2)})
    {
        auto const s = sample_initial(d, 1, 3);
        ASSERT_EQ(s.values.size(), 1u);
        EXPECT_TRUE(s.values[0] >= -2.0 && s.values[0] <= 2.0);
    }
    EXPECT_THROW(sample_initial(InitialDistribution::uniform(-2.0, 2.0), 0, 1), PreconditionError);
    EXPECT_THROW(sample_initial(InitialDistribution::uniform(1.0, 10.0), 1000, 1), ConfigError);
    EXPECT_THROW(InitialDistribution::uniform(1.0, 1.0), ConfigError);
}

TEST(SampleInitial, ClampOption)
{
    auto d = InitialDistribution::shifted_gamma(1.0, 1.0, -2.0, false);
    d.clamp_to_domain = true;
    auto const s = sample_initial(d, 100'000, 5);
    EXPECT_EQ(s.rejected, 0u);
    EXPECT_GT(std::count(s.values.begin(), s.values.end(), 2.0), 0);
}

TEST(Wasserstein1, QuantileSampleIsZero)
{
    std::size_t const n = 1000;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = transfer::invariant_quantile((i + 0.5) / n);
    EXPECT_EQ(wasserstein1(x), 0.0);
}

TEST(Wasserstein1, PointMassAtZero)
{
    std::size_t const n = 100'000;
    std::vector<double> x(n, 0.0);
    double oracle = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
        oracle += std::abs(2.0 * std::cos(pi * (i - 0.5) / n));
    oracle /= n;
    EXPECT_NEAR(wasserstein1(x), oracle, 1e-12);
    EXPECT_NEAR(wasserstein1(x), 4.0 / pi, 1e-6);
}

TEST(Wasserstein1, ExactInvariantSamplesBelowFloor)
{
    std::size_t const n = 1'000'000;
    auto g = substream(99, 0);
    std::vector<double> x(n);
    for (auto& v : x)
        v = transfer::invariant_quantile(uniform01(g));
    std::sort(x.begin(), x.end());
    double const w = wasserstein1(x);
    EXPECT_LT(w, 5e-3);
    EXPECT_LT(w, 3.0 * noise_floor(n));
}

TEST(Wasserstein1, Errors)
{
    EXPECT_THROW(wasserstein1({}), PreconditionError);
    EXPECT_THROW(wasserstein1({3.0}), DomainError);
}

TEST(LinearRegion, Examples)
{
    std::vector<double> geo;
    for (int i = 0; i <= 6; ++i)
        geo.push_back(std::pow(0.5, i));
    EXPECT_EQ(detect_linear_region(geo, 1e-6), (std::pair<int, int>{1, 6}));
    EXPECT_NEAR(fit_log_slope(geo, {1, 6}), -std::log(2.0), 1e-12);

    std::vector<double> hit{1.0, 0.5, 0.25, 0.125, 0.0625, 0.001, 0.002, 0.001};
    EXPECT_EQ(detect_linear_region(hit, 0.01), (std::pair<int, int>{1, 4}));

    EXPECT_THROW(detect_linear_region({1.0, 0.5}, 0.01), PreconditionError);
    EXPECT_THROW(detect_linear_region({1.0, 0.5, 0.001}, 0.01), ConvergenceError);
}

TEST(ConvergenceExperiment, ZeroIterations)
{
    auto const r = convergence_experiment(2, InitialDistribution::uniform(-2, 2), 1000, 0, 1);
    ASSERT_EQ(r.distances.size(), 1u);
    EXPECT_FALSE(r.fitted_slope.has_value());
    EXPECT_FALSE(r.fit_note.empty());
}

TEST(ConvergenceExperiment, DeterministicAcrossThreads)
{
    auto const d = InitialDistribution::shifted_gamma(1.0, 1.0, -2.0);
    auto const a = convergence_experiment(3, d, 200'000, 5, 11, 1);
    auto const b = convergence_experiment(3, d, 200'000, 5, 11, 3);
    EXPECT_EQ(a.distances, b.distances);
    EXPECT_EQ(a.fitted_slope, b.fitted_slope);
    EXPECT_EQ(a.fit_range, b.fit_range);
    EXPECT_EQ(a.rejected, b.rejected);
}

TEST(ConvergenceExperiment, EscapeNamesConfiguration)
{
    auto const d = InitialDistribution::uniform(-2.5, 2.5, false);
    try
    {
        convergence_experiment(2, d, 1000, 3, 5);
        FAIL() << "expected escape";
    }
    catch (maps::EscapeError const& e)
    {
        std::string const what = e.what();
        EXPECT_NE(what.find("m=2"), std::string::npos);
        EXPECT_NE(what.find("uniform"), std::string::npos);
        EXPECT_NE(what.find("seed=5"), std::string::npos);
    }
}

// Empirical CDF after one step versus the transfer-operator prediction.
TEST(ConvergenceExperiment, OneStepMatchesTransferOperator)
{
    std::size_t const n = 500'000;
    for (int m : {2, 3})
    {
        auto s = sample_initial(InitialDistribution::uniform(-2, 2), n, 17);
        auto const poly = maps::MapDescriptor::gen_logistic(m).polynomial();
        for (auto& v : s.values)
            v = std::clamp(poly(v), -2.0, 2.0);
        std::sort(s.values.begin(), s.values.end());

        auto const pred = transfer::pushforward_genlogistic(transfer::StepDensity::uniform(-2, 2), m);
        auto const& e = pred.edges();
        double cdf = 0.0, ks = 0.0;
        for (std::size_t c = 0; c <= pred.cells(); ++c)
        {
            if (c > 0)
                cdf += pred.values()[c - 1] * (e[c] - e[c - 1]);
            auto const k = std::upper_bound(s.values.begin(), s.values.end(), e[c]) - s.values.begin();
            ks = std::max(ks, std::abs(static_cast<double>(k) / n - cdf));
        }
        EXPECT_LT(ks, 3.0 / std::sqrt(static_cast<double>(n))) << "m=" << m;
    }
}
