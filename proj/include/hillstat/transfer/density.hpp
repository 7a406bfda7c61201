// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "hillstat/errors.hpp"
#include "hillstat/maps/map.hpp"
#include "hillstat/numerics/quadrature.hpp"
#include "hillstat/numerics/roots.hpp"

namespace hillstat::transfer {

using maps::Interval;
using numerics::ToleranceSpec;

/// Piecewise-constant function: values[i] on [edges[i], edges[i+1]).
///
/// Built through density() (nonnegative values) or signed_function() (any
/// sign, used for differences of densities).
class StepDensity
{
  public:
    StepDensity() = default;

    static StepDensity density(std::vector<double> edges, std::vector<double> values)
    {
        StepDensity p(std::move(edges), std::move(values), false);
        for (double v : p.values_)
            if (!(v >= 0.0))
                throw DomainError("StepDensity: density values must be nonnegative");
        return p;
    }

    static StepDensity signed_function(std::vector<double> edges, std::vector<double> values)
    {
        return StepDensity(std::move(edges), std::move(values), true);
    }

    /// n equal cells on [lo, hi].
    static StepDensity uniform_grid(double lo, double hi, std::vector<double> values,
                                    bool allow_negative = false)
    {
        std::size_t const n = values.size();
        if (n == 0)
            throw DomainError("StepDensity: need at least one cell");
        std::vector<double> edges(n + 1);
        for (std::size_t i = 0; i <= n; ++i)
            edges[i] = i == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
        StepDensity p = allow_negative ? signed_function(std::move(edges), std::move(values))
                                       : density(std::move(edges), std::move(values));
        p.uniform_ = true;
        return p;
    }

    /// Constant density 1 / (hi - lo) on [lo, hi].
    static StepDensity uniform(double lo, double hi)
    {
        return uniform_grid(lo, hi, {1.0 / (hi - lo)});
    }

    std::vector<double> const& edges() const noexcept { return edges_; }
    std::vector<double> const& values() const noexcept { return values_; }
    std::size_t cells() const noexcept { return values_.size(); }
    double lo() const noexcept { return edges_.front(); }
    double hi() const noexcept { return edges_.back(); }
    Interval domain() const noexcept { return {lo(), hi()}; }
    bool is_signed() const noexcept { return signed_; }
    /// True when the cells are known to be equal (built by uniform_grid).
    bool is_uniform_grid() const noexcept { return uniform_; }

    double width(std::size_t i) const noexcept { return edges_[i + 1] - edges_[i]; }

    double mass() const noexcept
    {
        double s = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i)
            s += values_[i] * width(i);
        return s;
    }

    /// Value at x; zero outside the domain. The right end belongs to the last cell.
    double operator()(double x) const noexcept
    {
        if (x < lo() || x > hi())
            return 0.0;
        auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
        std::size_t i = static_cast<std::size_t>(it - edges_.begin());
        i = i == 0 ? 0 : i - 1;
        return values_[std::min(i, values_.size() - 1)];
    }

    /// Integral of the function from lo() to x.
    double cumulative(double x) const noexcept
    {
        if (x <= lo())
            return 0.0;
        double s = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i)
        {
            if (x >= edges_[i + 1])
                s += values_[i] * width(i);
            else
            {
                s += values_[i] * (x - edges_[i]);
                break;
            }
        }
        return s;
    }

    StepDensity scaled(double factor) const
    {
        StepDensity out = *this;
        for (double& v : out.values_)
            v *= factor;
        if (factor < 0.0)
            out.signed_ = true;
        return out;
    }

    StepDensity normalized() const
    {
        double const m = mass();
        if (!(m > 0.0))
            throw DomainError("StepDensity: cannot normalise zero mass");
        return scaled(1.0 / m);
    }

  private:
    StepDensity(std::vector<double> edges, std::vector<double> values, bool is_signed)
        : edges_(std::move(edges))
        , values_(std::move(values))
        , signed_(is_signed)
    {
        if (values_.empty() || edges_.size() != values_.size() + 1)
            throw DomainError("StepDensity: need cells+1 edges and at least one cell");
        for (std::size_t i = 0; i + 1 < edges_.size(); ++i)
            if (!(edges_[i + 1] > edges_[i]) || !std::isfinite(edges_[i + 1]))
                throw DomainError("StepDensity: edges must be finite and strictly increasing");
        for (double v : values_)
            if (!std::isfinite(v))
                throw DomainError("StepDensity: values must be finite");
    }

    std::vector<double> edges_;
    std::vector<double> values_;
    bool signed_ = false;
    bool uniform_ = false;
};

/// A density known through its point values, optionally with its CDF.
struct SmoothDensity
{
    std::function<double(double)> evaluate;
    Interval domain;
    /// Points where evaluate may blow up; never sampled by quadrature.
    std::vector<double> singularities;
    /// Points splitting the domain into pieces on which the density is
    /// monotone (enables exact L1 distances through the CDF).
    std::vector<double> monotone_breaks;
    /// Antiderivative normalised to 0 at domain.lo; optional.
    std::function<double(double)> cdf;
    /// Essential variation; +inf marks a density outside BV, NaN unknown.
    double essential_variation = std::numeric_limits<double>::quiet_NaN();

    double operator()(double x) const { return evaluate(x); }
};

// -- Invariant densities ----------------------------------------------------

enum class InvariantKind
{
    logistic_q,
    discriminant_D
};

/// q(x) = 1 / (pi sqrt(x (1 - x))) on (0, 1), or D(x) = 1 / (pi sqrt(4 - x^2)) on (-2, 2).
inline double invariant_density(InvariantKind kind, double x)
{
    if (kind == InvariantKind::logistic_q)
    {
        if (!(x > 0.0 && x < 1.0))
            throw DomainError("invariant_density: q requires 0 < x < 1");
        return 1.0 / (std::numbers::pi * std::sqrt(x * (1.0 - x)));
    }
    if (!(x > -2.0 && x < 2.0))
        throw DomainError("invariant_density: D requires -2 < x < 2");
    return 1.0 / (std::numbers::pi * std::sqrt((2.0 - x) * (2.0 + x)));
}

/// CDF of D: 1/2 + arcsin(delta / 2) / pi.
inline double invariant_cdf(double delta)
{
    if (!(delta >= -2.0 && delta <= 2.0))
        throw DomainError("invariant_cdf: delta must lie in [-2, 2]");
    return 0.5 + std::asin(delta / 2.0) / std::numbers::pi;
}

/// Inverse of invariant_cdf: -2 cos(pi u).
inline double invariant_quantile(double u)
{
    if (!(u >= 0.0 && u <= 1.0))
        throw DomainError("invariant_quantile: u must lie in [0, 1]");
    return -2.0 * std::cos(std::numbers::pi * u);
}

inline SmoothDensity discriminant_density_D()
{
    SmoothDensity d;
    d.evaluate = [](double x) { return invariant_density(InvariantKind::discriminant_D, x); };
    d.domain = {-2.0, 2.0};
    d.singularities = {-2.0, 2.0};
    d.monotone_breaks = {0.0};
    d.cdf = [](double x) { return invariant_cdf(std::clamp(x, -2.0, 2.0)); };
    d.essential_variation = std::numeric_limits<double>::infinity();
    return d;
}

inline SmoothDensity logistic_density_q()
{
    SmoothDensity d;
    d.evaluate = [](double x) { return invariant_density(InvariantKind::logistic_q, x); };
    d.domain = {0.0, 1.0};
    d.singularities = {0.0, 1.0};
    d.monotone_breaks = {0.5};
    d.cdf = [](double x) {
        return 2.0 / std::numbers::pi * std::asin(std::sqrt(std::clamp(x, 0.0, 1.0)));
    };
    d.essential_variation = std::numeric_limits<double>::infinity();
    return d;
}

// -- Distances and variation ------------------------------------------------

namespace detail {

inline void require_same_domain(Interval a, Interval b, char const* who)
{
    double const scale = std::max({1.0, std::abs(a.lo), std::abs(a.hi)});
    if (std::abs(a.lo - b.lo) > 1e-12 * scale || std::abs(a.hi - b.hi) > 1e-12 * scale)
        throw DomainError(std::string(who) + ": densities live on different domains");
}

// Integral of |v - f| over [a, b] where f is monotone there and F' = f.
inline double abs_gap_monotone(double v, double a, double b, SmoothDensity const& f)
{
    auto const& F = f.cdf;
    auto g = [&](double x) { return f(x) - v; };
    // Evaluate just inside the piece; endpoints may be singular.
    double const ia = std::nextafter(a, b), ib = std::nextafter(b, a);
    double const ga = g(ia), gb = g(ib);
    auto signed_part = [&](double lo, double hi, double sign) {
        return sign * ((F(hi) - F(lo)) - v * (hi - lo));
    };
    if ((ga >= 0.0) == (gb >= 0.0))
        return std::abs(signed_part(a, b, 1.0));
    double const c = numerics::find_root(g, ia, ib, {1e-15 * std::max(1.0, std::abs(b)), 0.0, 500});
    double const s = ga >= 0.0 ? 1.0 : -1.0;
    return signed_part(a, c, s) + signed_part(c, b, -s);
}

}  // namespace detail

/// Exact L1 distance between two step functions (zero outside their domains).
inline double l1_distance(StepDensity const& p, StepDensity const& q)
{
    detail::require_same_domain(p.domain(), q.domain(), "l1_distance");
    std::vector<double> grid;
    grid.reserve(p.edges().size() + q.edges().size());
    std::merge(p.edges().begin(), p.edges().end(), q.edges().begin(), q.edges().end(),
               std::back_inserter(grid));
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    double s = 0.0;
    std::size_t i = 0, j = 0;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k)
    {
        double const mid = 0.5 * (grid[k] + grid[k + 1]);
        while (i + 1 < p.cells() && p.edges()[i + 1] <= mid)
            ++i;
        while (j + 1 < q.cells() && q.edges()[j + 1] <= mid)
            ++j;
        double const pv = mid < p.lo() || mid > p.hi() ? 0.0 : p.values()[i];
        double const qv = mid < q.lo() || mid > q.hi() ? 0.0 : q.values()[j];
        s += std::abs(pv - qv) * (grid[k + 1] - grid[k]);
    }
    return s;
}

/// L1 distance between a step function and a smooth density.
///
/// With a CDF and monotone pieces the integral is evaluated in closed form
/// per cell; otherwise each cell goes through quad_singular.
inline double l1_distance(StepDensity const& p,
                          SmoothDensity const& f,
                          ToleranceSpec const& tol = ToleranceSpec::quadrature())
{
    detail::require_same_domain(p.domain(), f.domain, "l1_distance");
    double s = 0.0;
    if (f.cdf)
    {
        for (std::size_t i = 0; i < p.cells(); ++i)
        {
            std::vector<double> cuts{p.edges()[i]};
            for (double b : f.monotone_breaks)
                if (b > p.edges()[i] && b < p.edges()[i + 1])
                    cuts.push_back(b);
            cuts.push_back(p.edges()[i + 1]);
            for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
                s += detail::abs_gap_monotone(p.values()[i], cuts[k], cuts[k + 1], f);
        }
        return s;
    }
    ToleranceSpec cell_tol = tol;
    cell_tol.abs_tol = tol.abs_tol / static_cast<double>(p.cells());
    for (std::size_t i = 0; i < p.cells(); ++i)
    {
        double const a = p.edges()[i], b = p.edges()[i + 1], v = p.values()[i];
        std::vector<double> sing;
        for (double x : f.singularities)
            if (x >= a && x <= b)
                sing.push_back(x);
        s += numerics::quad_singular([&](double x) { return std::abs(v - f(x)); }, a, b, sing,
                                     cell_tol);
    }
    return s;
}

/// Total variation of the extension by zero: interior jumps plus both
/// boundary values.
inline double variation(StepDensity const& p) noexcept
{
    auto const& v = p.values();
    double s = std::abs(v.front()) + std::abs(v.back());
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        s += std::abs(v[i + 1] - v[i]);
    return s;
}

/// Step function of cell width 1/l sampling p at cell midpoints.
inline StepDensity step_approximate(SmoothDensity const& p, int l)
{
    if (l < 1)
        throw PreconditionError("step_approximate: l must be >= 1");
    if (std::isinf(p.essential_variation))
        throw PreconditionError("step_approximate: density has unbounded variation");
    double const len = p.domain.length();
    auto const n = static_cast<std::size_t>(std::max(1.0, std::round(len * l)));
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i)
        values[i] = p(p.domain.lo + len * (static_cast<double>(i) + 0.5) / static_cast<double>(n));
    bool const negative = std::any_of(values.begin(), values.end(), [](double v) { return v < 0.0; });
    return StepDensity::uniform_grid(p.domain.lo, p.domain.hi, std::move(values), negative);
}

/// sum_{i < i_max} 2^{i/2} 1_{(2^{-i-1}, 2^{-i}]} on [0, 1].
inline StepDensity counterexample_density(int i_max)
{
    if (i_max < 1 || i_max > 1000)
        throw PreconditionError("counterexample_density: i_max must lie in [1, 1000]");
    std::vector<double> edges{0.0};
    std::vector<double> values{0.0};
    for (int i = i_max - 1; i >= 0; --i)
    {
        edges.push_back(std::ldexp(1.0, -(i + 1)));
        values.push_back(std::pow(2.0, 0.5 * i));
    }
    edges.push_back(1.0);
    return StepDensity::density(std::move(edges), std::move(values));
}

}  // namespace hillstat::transfer
