// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "hillstat/errors.hpp"

namespace hillstat::hill {

/// A real periodic potential V(x) for the Hill operator -d^2/dx^2 + V.
///
/// Every kind is evaluated through its restriction to one period, so
/// V(x + period) == V(x) holds up to the rounding of the periodic reduction.
class Potential
{
  public:
    struct Constant
    {
        double value;
    };
    /// amplitude * cos(2 pi frequency x); period is 1 / frequency.
    struct Cosine
    {
        double amplitude;
        double frequency;
    };
    /// Linear interpolation through (breakpoints[i], values[i]) inside one
    /// period, wrapping from the last breakpoint to the first plus period.
    struct PiecewiseLinear
    {
        std::vector<double> breakpoints;
        std::vector<double> values;
    };
    /// Equally spaced samples at x = i * period / n, linearly interpolated.
    struct Tabulated
    {
        std::vector<double> samples;
    };
    using Kind = std::variant<Constant, Cosine, PiecewiseLinear, Tabulated>;

    static Potential constant(double value, double period = 1.0)
    {
        return Potential(period, Constant{value});
    }

    static Potential free(double period = 1.0) { return constant(0.0, period); }

    static Potential cosine(double amplitude, double frequency = 1.0)
    {
        if (!(frequency > 0.0))
            throw DomainError("Potential::cosine: frequency must be positive");
        return Potential(1.0 / frequency, Cosine{amplitude, frequency});
    }

    static Potential piecewise_linear(double period,
                                      std::vector<double> breakpoints,
                                      std::vector<double> values)
    {
        if (breakpoints.empty() || breakpoints.size() != values.size())
            throw DomainError("Potential::piecewise_linear: need matching, nonempty "
                              "breakpoints and values");
        for (std::size_t i = 0; i < breakpoints.size(); ++i)
        {
            if (breakpoints[i] < 0.0 || breakpoints[i] >= period)
                throw DomainError("Potential::piecewise_linear: breakpoints must lie in "
                                  "[0, period)");
            if (i > 0 && !(breakpoints[i] > breakpoints[i - 1]))
                throw DomainError("Potential::piecewise_linear: breakpoints must be "
                                  "strictly increasing");
        }
        return Potential(period, PiecewiseLinear{std::move(breakpoints), std::move(values)});
    }

    static Potential tabulated(double period, std::vector<double> samples)
    {
        if (samples.empty())
            throw DomainError("Potential::tabulated: need at least one sample");
        return Potential(period, Tabulated{std::move(samples)});
    }

    double period() const noexcept { return period_; }
    Kind const& kind() const noexcept { return kind_; }

    std::string kind_name() const
    {
        return std::visit(
            [](auto const& k) -> std::string {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Constant>)
                    return "constant";
                else if constexpr (std::is_same_v<K, Cosine>)
                    return "cosine";
                else if constexpr (std::is_same_v<K, PiecewiseLinear>)
                    return "piecewise_linear";
                else
                    return "tabulated";
            },
            kind_);
    }

    double operator()(double x) const
    {
        return std::visit([&](auto const& k) { return eval(k, x); }, kind_);
    }

    /// Points in the open interval (lo, hi) where V is not smooth.
    std::vector<double> kinks(double lo, double hi) const
    {
        std::vector<double> local;
        if (auto const* p = std::get_if<PiecewiseLinear>(&kind_))
            local = p->breakpoints;
        else if (auto const* t = std::get_if<Tabulated>(&kind_))
        {
            for (std::size_t i = 0; i < t->samples.size(); ++i)
                local.push_back(period_ * static_cast<double>(i)
                                / static_cast<double>(t->samples.size()));
        }
        std::vector<double> out;
        if (local.empty())
            return out;
        double const first = std::floor(lo / period_);
        for (double cell = first; cell * period_ < hi; cell += 1.0)
            for (double b : local)
            {
                double const x = cell * period_ + b;
                if (x > lo && x < hi)
                    out.push_back(x);
            }
        return out;
    }

    double min_value() const { return extreme(false); }
    double max_value() const { return extreme(true); }

  private:
    Potential(double period, Kind kind)
        : period_(period)
        , kind_(std::move(kind))
    {
        if (!(period > 0.0) || !std::isfinite(period))
            throw DomainError("Potential: period must be positive");
    }

    double reduce(double x) const
    {
        double r = x - period_ * std::floor(x / period_);
        return r >= period_ ? 0.0 : r;
    }

    double eval(Constant const& c, double) const { return c.value; }

    double eval(Cosine const& c, double x) const
    {
        return c.amplitude * std::cos(2.0 * std::numbers::pi * c.frequency * reduce(x));
    }

    double eval(PiecewiseLinear const& p, double x) const
    {
        double const r = reduce(x);
        auto const& b = p.breakpoints;
        auto const& v = p.values;
        std::size_t const n = b.size();
        if (n == 1)
            return v[0];
        auto it = std::upper_bound(b.begin(), b.end(), r);
        double x0, x1, y0, y1;
        if (it == b.begin())
        {
            x0 = b[n - 1] - period_;
            y0 = v[n - 1];
            x1 = b[0];
            y1 = v[0];
        }
        else if (it == b.end())
        {
            x0 = b[n - 1];
            y0 = v[n - 1];
            x1 = b[0] + period_;
            y1 = v[0];
        }
        else
        {
            std::size_t const i = static_cast<std::size_t>(it - b.begin());
            x0 = b[i - 1];
            y0 = v[i - 1];
            x1 = b[i];
            y1 = v[i];
        }
        return y0 + (y1 - y0) * (r - x0) / (x1 - x0);
    }

    double eval(Tabulated const& t, double x) const
    {
        std::size_t const n = t.samples.size();
        double const pos = reduce(x) / period_ * static_cast<double>(n);
        std::size_t i = static_cast<std::size_t>(pos);
        if (i >= n)
            i = n - 1;
        double const frac = pos - static_cast<double>(i);
        return t.samples[i] + (t.samples[(i + 1) % n] - t.samples[i]) * frac;
    }

    double extreme(bool want_max) const
    {
        auto pick = [want_max](std::vector<double> const& v) {
            return want_max ? *std::max_element(v.begin(), v.end())
                            : *std::min_element(v.begin(), v.end());
        };
        return std::visit(
            [&](auto const& k) -> double {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Constant>)
                    return k.value;
                else if constexpr (std::is_same_v<K, Cosine>)
                    return want_max ? std::abs(k.amplitude) : -std::abs(k.amplitude);
                else if constexpr (std::is_same_v<K, PiecewiseLinear>)
                    return pick(k.values);
                else
                    return pick(k.samples);
            },
            kind_);
    }

    double period_;
    Kind kind_;
};

}  // namespace hillstat::hill
