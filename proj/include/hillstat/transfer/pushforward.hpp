// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "hillstat/errors.hpp"
#include "hillstat/transfer/density.hpp"

namespace hillstat::transfer {

namespace detail {

// Frobenius-Perron image of p under the map whose branches are the affine
// bijections [j/s, (j+1)/s] -> [0, 1], increasing for even j and decreasing
// for odd j, for j < branches. This covers g_m (branches = s = m) and K_l.
inline StepDensity fold_pushforward(StepDensity const& p, int s, std::int64_t branches)
{
    std::vector<double> out_edges{0.0, 1.0};
    for (double e : p.edges())
    {
        double const se = s * e;
        auto j = static_cast<std::int64_t>(std::floor(se));
        if (j >= branches)
            j = branches - 1;
        if (j < 0)
            continue;
        double const y = j % 2 == 0 ? se - static_cast<double>(j) : static_cast<double>(j + 1) - se;
        if (y > 0.0 && y < 1.0)
            out_edges.push_back(y);
    }
    std::sort(out_edges.begin(), out_edges.end());
    out_edges.erase(std::unique(out_edges.begin(), out_edges.end()), out_edges.end());

    double const inv_s = 1.0 / s;
    std::vector<double> values(out_edges.size() - 1, 0.0);
    for (std::size_t c = 0; c < values.size(); ++c)
    {
        double const y = 0.5 * (out_edges[c] + out_edges[c + 1]);
        double acc = 0.0;
        for (std::int64_t j = 0; j < branches; ++j)
        {
            double const x = j % 2 == 0 ? (y + static_cast<double>(j)) * inv_s
                                        : (static_cast<double>(j + 1) - y) * inv_s;
            acc += p(x);
        }
        values[c] = acc * inv_s;
    }
    return p.is_signed() ? StepDensity::signed_function(std::move(out_edges), std::move(values))
                         : StepDensity::density(std::move(out_edges), std::move(values));
}

// Uniform grid of N cells on [0, 1]: the image is again a step function on
// the same grid, cell c collecting one cell from every branch.
inline std::vector<double> tent_pushforward_grid(std::vector<double> const& v, int m)
{
    auto const N = static_cast<std::int64_t>(v.size());
    std::vector<double> out(v.size(), 0.0);
    double const inv_m = 1.0 / m;
    for (std::int64_t c = 0; c < N; ++c)
    {
        double acc = 0.0;
        for (std::int64_t j = 0; j < m; ++j)
        {
            std::int64_t const idx = j % 2 == 0 ? (c + j * N) / m : ((j + 1) * N - c - 1) / m;
            acc += v[static_cast<std::size_t>(idx)];
        }
        out[static_cast<std::size_t>(c)] = acc * inv_m;
    }
    return out;
}

}  // namespace detail

/// Cell averages of a uniform-grid step function on `factor`-times coarser cells.
inline std::vector<double> rebin(std::vector<double> const& v, std::size_t factor)
{
    if (factor == 0 || v.size() % factor != 0)
        throw PreconditionError("rebin: factor must divide the number of cells");
    std::vector<double> out(v.size() / factor, 0.0);
    for (std::size_t i = 0; i < out.size(); ++i)
    {
        double acc = 0.0;
        for (std::size_t k = 0; k < factor; ++k)
            acc += v[i * factor + k];
        out[i] = acc / static_cast<double>(factor);
    }
    return out;
}

/// Exact transfer-operator image of p (on [0, 1]) under the tent map g_m.
inline StepDensity pushforward_tent(StepDensity const& p, int m)
{
    if (m < 1)
        throw DomainError("pushforward_tent: m must be >= 1");
    if (p.lo() != 0.0 || p.hi() != 1.0)
        throw DomainError("pushforward_tent: density must live on [0, 1]");
    if (p.is_uniform_grid())
        return StepDensity::uniform_grid(0.0, 1.0, detail::tent_pushforward_grid(p.values(), m),
                                         p.is_signed());
    return detail::fold_pushforward(p, m, m);
}

/// Exact image of p (supported in [0, inf)) under the fold K_l; lands on [0, 1].
inline StepDensity pushforward_fold(StepDensity const& p, int l)
{
    if (l < 1)
        throw DomainError("pushforward_fold: l must be >= 1");
    if (p.lo() < 0.0)
        throw DomainError("pushforward_fold: density must live on [0, inf)");
    double const top = std::ceil(p.hi() * l);
    if (top > 1e9)
        throw DomainError("pushforward_fold: support too long for l");
    auto const branches = std::max<std::int64_t>(1, static_cast<std::int64_t>(top));
    return detail::fold_pushforward(p, l, branches);
}

// -- Densities on [-2, 2] through the angle coordinate kappa ------------------
//
// delta = 2 cos(pi kappa) maps kappa in [0, 1] onto [-2, 2] (decreasing) and
// conjugates g_m to f_m. In kappa the invariant density D becomes 1.

/// Masses of p over the uniform kappa-grid with `resolution` cells, returned
/// as kappa-densities (mass * resolution).
inline std::vector<double> to_kappa_grid(StepDensity const& p, std::size_t resolution)
{
    detail::require_same_domain(p.domain(), {-2.0, 2.0}, "to_kappa_grid");
    if (resolution == 0)
        throw PreconditionError("to_kappa_grid: resolution must be positive");
    std::vector<double> out(resolution);
    double const n = static_cast<double>(resolution);
    // Walking kappa upward walks delta downward from 2.
    std::vector<double> const& e = p.edges();
    std::vector<double> cum(e.size(), 0.0);
    for (std::size_t i = 0; i + 1 < e.size(); ++i)
        cum[i + 1] = cum[i] + p.values()[i] * (e[i + 1] - e[i]);
    auto P = [&](double x) {
        if (x <= e.front())
            return 0.0;
        if (x >= e.back())
            return cum.back();
        auto it = std::upper_bound(e.begin(), e.end(), x);
        std::size_t const i = static_cast<std::size_t>(it - e.begin()) - 1;
        return cum[i] + p.values()[i] * (x - e[i]);
    };
    double prev = P(2.0);
    for (std::size_t c = 0; c < resolution; ++c)
    {
        double const kb = static_cast<double>(c + 1) / n;
        double const next = c + 1 == resolution ? 0.0 : P(2.0 * std::cos(std::numbers::pi * kb));
        out[c] = (prev - next) * n;
        prev = next;
    }
    return out;
}

/// Step density on the delta-images of the uniform kappa-grid carrying the
/// same cell masses as the kappa-densities v.
inline StepDensity from_kappa_grid(std::vector<double> const& v, bool allow_negative = false)
{
    std::size_t const n = v.size();
    std::vector<double> edges(n + 1), values(n);
    for (std::size_t i = 0; i <= n; ++i)
    {
        // Edge i in delta corresponds to kappa = (n - i) / n.
        double const kappa = static_cast<double>(n - i) / static_cast<double>(n);
        edges[i] = i == 0 ? -2.0 : (i == n ? 2.0 : 2.0 * std::cos(std::numbers::pi * kappa));
    }
    for (std::size_t i = 0; i < n; ++i)
    {
        double const mass = v[n - 1 - i] / static_cast<double>(n);
        values[i] = mass / (edges[i + 1] - edges[i]);
    }
    return allow_negative ? StepDensity::signed_function(std::move(edges), std::move(values))
                          : StepDensity::density(std::move(edges), std::move(values));
}

/// One transfer step of p (on [-2, 2]) under f_m, through the kappa-grid of
/// the given resolution.
inline StepDensity pushforward_genlogistic(StepDensity const& p, int m, std::size_t resolution = 1u << 14)
{
    if (m < 1)
        throw DomainError("pushforward_genlogistic: m must be >= 1");
    auto const kappa = to_kappa_grid(p, resolution);
    return from_kappa_grid(detail::tent_pushforward_grid(kappa, m), p.is_signed());
}

/// Transfer-operator evolution of a density on [-2, 2] under f_m, measured
/// against the invariant density D.
struct EvolutionRecord
{
    int step;
    double l1_to_invariant;
    double mass;
    /// kappa-grid resolution the initial density was resolved at.
    std::size_t resolution;
    /// True when every step was followed by an exact m-fold coarsening, so
    /// the reported cell averages are those of the exact evolution.
    bool exact;
};

struct EvolutionReport
{
    int m;
    std::size_t base_resolution;
    std::size_t resolution_cap;
    std::vector<EvolutionRecord> records;
    /// kappa-densities at base resolution after the last step.
    std::vector<double> final_kappa;
};

/// Evolves p0 for n_steps steps.
///
/// Step n starts from the exact cell masses of p0 at resolution
/// base * m^k with k = n where that stays within cap (else the largest k
/// that does), pushes n times and coarsens by m after each of the last k
/// pushes. The L1 distance to D is evaluated on the base kappa-grid, where
/// it equals sum |v_c - 1| / base.
inline EvolutionReport evolve_genlogistic(StepDensity const& p0,
                                          int m,
                                          int n_steps,
                                          std::size_t base = 1u << 14,
                                          std::size_t cap = 1u << 20)
{
    if (m < 2)
        throw DomainError("evolve_genlogistic: m must be >= 2");
    if (n_steps < 0)
        throw PreconditionError("evolve_genlogistic: n_steps must be nonnegative");
    if (base == 0 || cap < base)
        throw PreconditionError("evolve_genlogistic: need 0 < base <= cap");
    EvolutionReport report{m, base, cap, {}, {}};
    auto const um = static_cast<std::size_t>(m);
    for (int n = 0; n <= n_steps; ++n)
    {
        int k = 0;
        std::size_t resolution = base;
        while (k < n && resolution <= cap / um)
        {
            resolution *= um;
            ++k;
        }
        auto v = to_kappa_grid(p0, resolution);
        for (int step = 0; step < n; ++step)
        {
            v = detail::tent_pushforward_grid(v, m);
            if (step >= n - k)
                v = rebin(v, um);
        }
        double l1 = 0.0, mass = 0.0;
        for (double x : v)
        {
            l1 += std::abs(x - 1.0);
            mass += x;
        }
        double const nb = static_cast<double>(v.size());
        report.records.push_back({n, l1 / nb, mass / nb, resolution, k == n});
        if (n == n_steps)
            report.final_kappa = std::move(v);
    }
    return report;
}

}  // namespace hillstat::transfer
