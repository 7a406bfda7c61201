// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "hillstat/numerics/quadrature.hpp"
#include "hillstat/transfer/density.hpp"
#include "hillstat/transfer/mixing.hpp"
#include "hillstat/transfer/pushforward.hpp"

using namespace hillstat;
using namespace hillstat::transfer;
using std::numbers::pi;

namespace {

StepDensity random_step(std::mt19937_64& rng, int cells, double lo, double hi, bool allow_negative)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> cuts;
    for (int i = 0; i < cells - 1; ++i)
        cuts.push_back(lo + (hi - lo) * u(rng));
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> edges{lo};
    edges.insert(edges.end(), cuts.begin(), cuts.end());
    edges.push_back(hi);
    std::vector<double> values;
    for (int i = 0; i < cells; ++i)
        values.push_back(allow_negative ? 2 * u(rng) - 1 : u(rng));
    return allow_negative ? StepDensity::signed_function(edges, values)
                          : StepDensity::density(edges, values);
}

// Cell averages of D over n equal cells of [-2, 2].
StepDensity discretized_D(int n)
{
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
    {
        double const a = -2.0 + 4.0 * i / n, b = -2.0 + 4.0 * (i + 1) / n;
        v[i] = (invariant_cdf(b) - invariant_cdf(a)) / (b - a);
    }
    return StepDensity::uniform_grid(-2.0, 2.0, v);
}

}  // namespace

TEST(StepDensity, Basics)
{
    auto p = StepDensity::density({0.0, 0.5, 1.0}, {2.0, 0.0});
    EXPECT_EQ(p.mass(), 1.0);
    EXPECT_EQ(p(0.25), 2.0);
    EXPECT_EQ(p(0.75), 0.0);
    EXPECT_EQ(p(1.5), 0.0);
    EXPECT_EQ(p.cumulative(0.25), 0.5);
    EXPECT_THROW(StepDensity::density({0.0, 1.0}, {-1.0}), DomainError);
    EXPECT_THROW(StepDensity::density({0.0, 0.0, 1.0}, {1.0, 1.0}), DomainError);
    EXPECT_NO_THROW(StepDensity::signed_function({0.0, 1.0}, {-1.0}));
}

TEST(PushforwardTent, Examples)
{
    for (int m = 1; m <= 6; ++m)
    {
        auto const q = pushforward_tent(StepDensity::uniform(0.0, 1.0), m);
        for (double v : q.values())
            EXPECT_DOUBLE_EQ(v, 1.0);
    }
    auto const q = pushforward_tent(StepDensity::density({0.0, 0.5, 1.0}, {2.0, 0.0}), 2);
    for (std::size_t i = 0; i < q.cells(); ++i)
        EXPECT_DOUBLE_EQ(q.values()[i], 1.0);

    // Width-1/m step functions aligned to the m-grid go to their mass.
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int m = 2; m <= 6; ++m)
    {
        std::vector<double> v(m);
        for (double& x : v)
            x = u(rng);
        auto const p = StepDensity::uniform_grid(0.0, 1.0, v);
        auto const general = StepDensity::density(p.edges(), p.values());
        for (auto const& img : {pushforward_tent(p, m), pushforward_tent(general, m)})
        {
            ASSERT_EQ(img.cells(), img.is_uniform_grid() ? static_cast<std::size_t>(m) : 1u);
            for (double x : img.values())
                EXPECT_NEAR(x, p.mass(), 1e-14);
        }
    }
}

TEST(PushforwardTent, GridPathMatchesGeneralPath)
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int m = 1; m <= 5; ++m)
    {
        std::vector<double> v(60);
        for (double& x : v)
            x = u(rng);
        auto const grid = StepDensity::uniform_grid(0.0, 1.0, v);
        auto const general = StepDensity::density(grid.edges(), grid.values());
        auto const a = pushforward_tent(grid, m);
        auto const b = pushforward_tent(general, m);
        EXPECT_LT(l1_distance(a, b), 1e-13);
        EXPECT_NEAR(a.mass(), grid.mass(), 1e-12);
    }
}

TEST(PushforwardTent, MassContractionLinearity)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial)
    {
        int const m = 1 + trial % 6;
        auto const p = random_step(rng, 7, 0.0, 1.0, true);
        auto const q = random_step(rng, 5, 0.0, 1.0, true);
        auto const Qp = pushforward_tent(p, m);
        EXPECT_NEAR(Qp.mass(), p.mass(), 1e-12);
        auto const zero = StepDensity::signed_function({0.0, 1.0}, {0.0});
        EXPECT_LE(l1_distance(Qp, zero), l1_distance(p, zero) + 1e-12);

        // Q(2p - 3q) on the merged grid.
        std::vector<double> edges(p.edges());
        edges.insert(edges.end(), q.edges().begin(), q.edges().end());
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        std::vector<double> vals;
        for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        {
            double const mid = 0.5 * (edges[i] + edges[i + 1]);
            vals.push_back(2 * p(mid) - 3 * q(mid));
        }
        auto const combo = pushforward_tent(StepDensity::signed_function(edges, vals), m);
        auto const Qq = pushforward_tent(q, m);
        double err = 0.0;
        for (std::size_t i = 0; i + 1 < combo.edges().size(); ++i)
        {
            double const mid = 0.5 * (combo.edges()[i] + combo.edges()[i + 1]);
            err = std::max(err, std::abs(combo.values()[i] - (2 * Qp(mid) - 3 * Qq(mid))));
        }
        EXPECT_LT(err, 1e-12);
    }
}

TEST(PushforwardFold, Examples)
{
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int l = 1; l <= 8; ++l)
    {
        // Width-1/l step function on [0, 3], normalised.
        std::vector<double> v(3 * l);
        for (double& x : v)
            x = u(rng);
        auto const p = StepDensity::uniform_grid(0.0, 3.0, v).normalized();
        auto const q = pushforward_fold(StepDensity::density(p.edges(), p.values()), l);
        EXPECT_EQ(q.lo(), 0.0);
        EXPECT_EQ(q.hi(), 1.0);
        for (double x : q.values())
            EXPECT_NEAR(x, 1.0, 1e-12);
    }
    auto const p = random_step(rng, 9, 0.0, 1.0, false);
    auto const q = pushforward_fold(p, 1);
    EXPECT_LT(l1_distance(p, q), 1e-15);
}

TEST(PushforwardFold, CounterexampleRate)
{
    int const i_max = 40;
    auto const p = counterexample_density(i_max);
    double const mass = p.mass();
    for (int n = 0; n <= 12; ++n)
    {
        int const l = 1 << n;
        auto const q = pushforward_fold(p, l);
        auto const flat = StepDensity::density({0.0, 1.0}, {mass});
        double const err = l1_distance(q, flat);

        // Hand-derived image: the first n dyadic pieces spread to the constant
        // c_n, the remaining ones are rescaled copies of themselves.
        double c_n = 0.0;
        for (int i = 0; i < n; ++i)
            c_n += 0.5 * std::pow(2.0, -0.5 * i);
        double oracle = std::abs(c_n - mass) * std::ldexp(1.0, -(i_max - n));
        for (int k = 0; k < i_max - n; ++k)
            oracle += std::abs(c_n + std::pow(2.0, 0.5 * k - 0.5 * n) - mass) * std::ldexp(1.0, -(k + 1));
        EXPECT_NEAR(err, oracle, 1e-12) << "n=" << n;

        double const infinite = (2.0 + std::sqrt(2.0)) / 4.0 * std::pow(2.0, -0.5 * n);
        EXPECT_NEAR(err / infinite, 1.0, 1e-3) << "n=" << n;
        // The limit mass is (2 + sqrt 2)/2, so the normalised error is 2^{-n/2}/2.
        EXPECT_NEAR(err / mass / std::pow(2.0, -0.5 * n), 0.5, 1e-3);
    }
}

TEST(PushforwardFold, BoundedVariationRate)
{
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 20; ++trial)
    {
        auto const p = random_step(rng, 6 + trial % 5, 0.0, 2.5, false).normalized();
        for (int l = 2; l <= 256; l *= 2)
        {
            auto const q = pushforward_fold(p, l);
            auto const flat = StepDensity::density({0.0, 1.0}, {1.0});
            EXPECT_LE(l1_distance(q, flat), 2 * variation(p) / l + 1e-12);
            EXPECT_NEAR(q.mass(), 1.0, 1e-12);
        }
    }
}

TEST(PushforwardGenLogistic, InvarianceOfD)
{
    auto const D = discriminant_density_D();
    for (std::size_t n : {4096u, 16384u})
    {
        // D carried by the kappa-grid is constant 1 there, hence exactly invariant.
        auto const p = from_kappa_grid(std::vector<double>(n, 1.0));
        auto const img = pushforward_genlogistic(p, 3, n);
        EXPECT_NEAR(img.mass(), 1.0, 1e-9);
        EXPECT_LT(l1_distance(img, p), 1e-12);
        // What remains against D is the step representation error, O(log n / n).
        EXPECT_NEAR(l1_distance(img, D), l1_distance(p, D), 1e-9);
        EXPECT_LE(l1_distance(img, D), 5.0 * std::log(double(n)) / n);
    }
    auto const img = pushforward_genlogistic(from_kappa_grid(std::vector<double>(1u << 14, 1.0)), 3);
    EXPECT_LE(l1_distance(img, D), 1e-3);

    // Cells uniform in delta resolve D poorly at the edges; one step does not
    // make that worse.
    auto const coarse = discretized_D(4096);
    double const before = l1_distance(coarse, D);
    double const after = l1_distance(pushforward_genlogistic(coarse, 3), D);
    EXPECT_LE(after, before + 1e-9);
}

TEST(PushforwardGenLogistic, EvenMapForgetsSign)
{
    std::mt19937_64 rng(8);
    auto const p = random_step(rng, 11, -2.0, 2.0, false);
    std::vector<double> mirrored_edges, mirrored_values;
    for (auto it = p.edges().rbegin(); it != p.edges().rend(); ++it)
        mirrored_edges.push_back(-*it);
    mirrored_values.assign(p.values().rbegin(), p.values().rend());
    auto const pm = StepDensity::density(mirrored_edges, mirrored_values);
    auto const a = pushforward_genlogistic(p, 2, 1024);
    auto const b = pushforward_genlogistic(pm, 2, 1024);
    EXPECT_LT(l1_distance(a, b), 1e-12);
}

TEST(PushforwardGenLogistic, KappaRoundTripKeepsMasses)
{
    std::mt19937_64 rng(10);
    auto const p = random_step(rng, 13, -2.0, 2.0, false);
    auto const k = to_kappa_grid(p, 512);
    auto const back = from_kappa_grid(k);
    EXPECT_NEAR(back.mass(), p.mass(), 1e-12);
    for (double x : {-1.5, -0.3, 0.0, 0.9, 1.99})
        EXPECT_NEAR(back.cumulative(2 * std::cos(pi * std::round(std::acos(x / 2) / pi * 512) / 512)),
                    p.cumulative(2 * std::cos(pi * std::round(std::acos(x / 2) / pi * 512) / 512)), 1e-12);
}

TEST(Evolution, UniformDecaysLikeInverseSquareOfDegree)
{
    // On polynomial densities the transfer operator of f_m has eigenvalues
    // m^{-k} (k even); the slowest non-invariant mode decays like m^{-2}.
    auto const p0 = StepDensity::uniform(-2.0, 2.0);
    for (int m = 2; m <= 4; ++m)
    {
        auto const r = evolve_genlogistic(p0, m, 5, 1u << 12, 1u << 18);
        ASSERT_EQ(r.records.size(), 6u);
        double const d0 = r.records[0].l1_to_invariant;
        double const x = 2.0 * std::sqrt(1.0 - 4.0 / (pi * pi));
        EXPECT_NEAR(d0, x - 4.0 * std::asin(x / 2) / pi, 1e-6);
        for (auto const& rec : r.records)
            EXPECT_NEAR(rec.mass, 1.0, 1e-12);
        for (int n = 1; n <= 5; ++n)
        {
            // Upper bound of the bounded-variation estimate.
            double const essV = 2 * 0.25 * pi * 2;  // kappa-density variation bound
            EXPECT_LE(r.records[n].l1_to_invariant, essV * std::pow(m, -n) + 1e-9);
        }
        double const last_ratio = r.records[5].l1_to_invariant / r.records[4].l1_to_invariant;
        EXPECT_NEAR(last_ratio, 1.0 / (m * m), 0.02) << "m=" << m;
    }
}

TEST(Evolution, SetwiseConvergenceForLogistic)
{
    // Uniform on [0, 1] for F_4 is uniform on [-2, 2] for f_2 via x = (2 - delta)/4.
    auto const r0 = StepDensity::uniform(-2.0, 2.0);
    double prev_a = 1.0, prev_b = 1.0;
    for (int n = 0; n <= 8; ++n)
    {
        auto const rep = evolve_genlogistic(r0, 2, n, 3 * 256, 3 * 256 * 512);
        auto const& v = rep.final_kappa;
        double const N = static_cast<double>(v.size());
        // x in [0, 1/4] <=> delta in [1, 2] <=> kappa in [0, 1/3]; [1/4, 3/4] <=> kappa in [1/3, 2/3].
        double a = 0.0, b = 0.0;
        for (std::size_t c = 0; c < v.size(); ++c)
        {
            if (c < v.size() / 3)
                a += v[c] / N;
            else if (c < 2 * v.size() / 3)
                b += v[c] / N;
        }
        double const da = std::abs(a - 1.0 / 3), db = std::abs(b - 1.0 / 3);
        if (n > 3)
        {
            EXPECT_LE(da, prev_a + 1e-15) << n;
            EXPECT_LE(db, prev_b + 1e-15) << n;
        }
        prev_a = da;
        prev_b = db;
    }
    EXPECT_LT(prev_a, 1e-4);
    EXPECT_LT(prev_b, 1e-4);
}

TEST(L1Distance, Examples)
{
    auto const p = StepDensity::density({0.0, 0.3, 1.0}, {0.5, 1.2});
    EXPECT_EQ(l1_distance(p, p), 0.0);
    EXPECT_DOUBLE_EQ(l1_distance(StepDensity::uniform(0.0, 1.0),
                                 StepDensity::density({0.0, 0.5, 1.0}, {2.0, 0.0})),
                     1.0);
    EXPECT_THROW(l1_distance(StepDensity::uniform(0.0, 1.0), StepDensity::uniform(0.0, 2.0)),
                 DomainError);

    // Uniform quarter against D: closed form from the crossing D(x*) = 1/4.
    double const x = 2.0 * std::sqrt(1.0 - 4.0 / (pi * pi));
    double const closed = x - 4.0 * std::asin(x / 2) / pi;
    auto const D = discriminant_density_D();
    auto const u = StepDensity::uniform(-2.0, 2.0);
    EXPECT_NEAR(l1_distance(u, D), closed, 1e-12);
    auto D_nocdf = D;
    D_nocdf.cdf = nullptr;
    EXPECT_NEAR(l1_distance(u, D_nocdf), closed, 1e-8);
    EXPECT_NEAR(closed, 0.4210270, 1e-6);
}

TEST(L1Distance, CdfPathMatchesQuadrature)
{
    std::mt19937_64 rng(12);
    for (auto const& f : {discriminant_density_D(), logistic_density_q()})
    {
        auto const p = random_step(rng, 9, f.domain.lo, f.domain.hi, false);
        auto g = f;
        g.cdf = nullptr;
        EXPECT_NEAR(l1_distance(p, f), l1_distance(p, g), 1e-8);
    }
}

TEST(Variation, Examples)
{
    EXPECT_EQ(variation(StepDensity::uniform(0.0, 1.0)), 2.0);
    EXPECT_EQ(variation(StepDensity::density({0.0, 0.3}, {1.5})), 3.0);
    EXPECT_EQ(variation(StepDensity::uniform_grid(0.0, 1.0, {1.0, 2.0, 1.0})), 4.0);
}

TEST(StepApproximate, Examples)
{
    SmoothDensity c;
    c.evaluate = [](double) { return 0.5; };
    c.domain = {0.0, 2.0};
    auto const pc = step_approximate(c, 3);
    EXPECT_EQ(pc.cells(), 6u);
    EXPECT_NEAR(l1_distance(pc, c), 0.0, 1e-12);

    SmoothDensity lin;
    lin.evaluate = [](double x) { return x; };
    lin.domain = {0.0, 1.0};
    lin.essential_variation = 2.0;
    for (int l : {1, 4, 16})
    {
        double const err = l1_distance(step_approximate(lin, l), lin);
        EXPECT_NEAR(err, 1.0 / (4.0 * l), 1e-9);
        EXPECT_LE(err, lin.essential_variation / l);
    }
    EXPECT_THROW(step_approximate(discriminant_density_D(), 4), PreconditionError);
}

TEST(Counterexample, Masses)
{
    auto const p1 = counterexample_density(1);
    EXPECT_EQ(p1.mass(), 0.5);
    EXPECT_EQ(p1(0.75), 1.0);
    EXPECT_EQ(p1(0.25), 0.0);
    // (1/2) sum_i 2^{-i/2} = (2 + sqrt 2) / 2; the tail after i_max terms is
    // limit * 2^{-i_max/2}.
    double const limit = (2.0 + std::sqrt(2.0)) / 2.0;
    EXPECT_NEAR(counterexample_density(2).mass(), 0.5 + std::sqrt(2.0) / 4, 1e-15);
    EXPECT_NEAR(counterexample_density(20).mass(), limit, std::ldexp(1.0, -9));
    EXPECT_NEAR(counterexample_density(20).mass(), limit * (1 - std::ldexp(1.0, -10)), 1e-14);
    EXPECT_NEAR(counterexample_density(60).mass(), limit, 1e-8);
}

TEST(InvariantDensity, Examples)
{
    EXPECT_NEAR(invariant_density(InvariantKind::logistic_q, 0.5), 2.0 / pi, 1e-15);
    EXPECT_NEAR(invariant_density(InvariantKind::discriminant_D, 0.0), 1.0 / (2 * pi), 1e-15);
    EXPECT_NEAR(invariant_density(InvariantKind::logistic_q, 0.25) / 4,
                invariant_density(InvariantKind::discriminant_D, 1.0), 1e-15);
    EXPECT_THROW(invariant_density(InvariantKind::logistic_q, 0.0), DomainError);
    EXPECT_THROW(invariant_density(InvariantKind::discriminant_D, 2.0), DomainError);

    EXPECT_EQ(invariant_cdf(0.0), 0.5);
    EXPECT_EQ(invariant_cdf(2.0), 1.0);
    EXPECT_NEAR(invariant_quantile(0.5), 0.0, 1e-15);
    EXPECT_NEAR(invariant_quantile(1.0 / 3), -1.0, 1e-15);
    for (int i = 0; i <= 1000; ++i)
    {
        double const u = i / 1000.0;
        EXPECT_NEAR(invariant_cdf(invariant_quantile(u)), u, 1e-12);
    }
    EXPECT_THROW(invariant_quantile(1.5), DomainError);
    double const total = numerics::quad_singular(discriminant_density_D().evaluate, -2.0, 2.0,
                                                 std::vector<double>{-2.0, 2.0});
    EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(Preimages, Examples)
{
    using RI = RationalInterval;
    EXPECT_EQ(preimage_intervals(2, 1, {Rational(0), Rational(1, 2)}),
              (std::vector<RI>{{Rational(0), Rational(1, 4)}, {Rational(3, 4), Rational(1)}}));
    EXPECT_EQ(preimage_intervals(2, 1, {Rational(0), Rational(1)}),
              (std::vector<RI>{{Rational(0), Rational(1)}}));
    EXPECT_EQ(preimage_intervals(3, 1, {Rational(0), Rational(1, 3)}),
              (std::vector<RI>{{Rational(0), Rational(1, 9)}, {Rational(5, 9), Rational(7, 9)}}));
    // Measure is preserved (Lebesgue is invariant) and the count is bounded.
    for (int m = 2; m <= 4; ++m)
        for (int n = 1; n <= 5; ++n)
        {
            RI const t{Rational(1, 7), Rational(3, 5)};
            auto const pre = preimage_intervals(m, n, t);
            EXPECT_EQ(measure(pre), t.length());
            EXPECT_LE(pre.size(), static_cast<std::size_t>(std::pow(m, n)));
        }
}

TEST(Mixing, ExactZeroForAdicSets)
{
    using RI = RationalInterval;
    EXPECT_EQ(mixing_correlation(2, 1, {Rational(0), Rational(1, 2)}, {Rational(0), Rational(1, 2)}),
              Rational(0));
    EXPECT_EQ(mixing_correlation(3, 4, {Rational(0), Rational(1)}, {Rational(2, 7), Rational(5, 6)}),
              Rational(0));
    std::mt19937_64 rng(21);
    for (int m = 2; m <= 5; ++m)
        for (int i = 1; i <= 4; ++i)
        {
            std::int64_t const cells = static_cast<std::int64_t>(std::pow(m, i));
            for (int trial = 0; trial < 5; ++trial)
            {
                auto pick = [&] {
                    std::int64_t a = static_cast<std::int64_t>(rng() % cells);
                    std::int64_t b = static_cast<std::int64_t>(rng() % cells);
                    if (a > b)
                        std::swap(a, b);
                    return RI{Rational(a, cells), Rational(b + 1, cells)};
                };
                RI const A = pick(), B = pick();
                for (int n = i; n <= i + 1; ++n)
                    EXPECT_EQ(mixing_correlation(m, n, A, B), Rational(0))
                        << "m=" << m << " i=" << i << " n=" << n;
            }
        }
    // Before the resolution is reached correlations need not vanish.
    EXPECT_NE(mixing_correlation(2, 1, {Rational(0), Rational(1, 4)}, {Rational(0), Rational(1, 4)}),
              Rational(0));
}
