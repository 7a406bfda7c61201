// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hillstat/errors.hpp"
#include "hillstat/hill/monodromy.hpp"
#include "hillstat/hill/potential.hpp"
#include "hillstat/numerics/roots.hpp"

namespace hillstat::hill {

struct Band
{
    double lower;
    double upper;
    /// The band continues past the scanned range; upper is lambda_max.
    bool truncated = false;
};

struct BandList
{
    std::vector<Band> bands;
    double lambda_max = 0.0;
    /// Scan anomalies (bands or extrema resolved below the grid spacing).
    std::vector<std::string> warnings;

    std::size_t complete_bands() const
    {
        return static_cast<std::size_t>(
            std::count_if(bands.begin(), bands.end(), [](Band const& b) { return !b.truncated; }));
    }
};

namespace detail {

inline std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace detail

/// Spectral bands {lambda <= lambda_max : |Delta(lambda)| <= 2}.
///
/// Delta and dDelta/dlambda are sampled on a grid uniform in
/// sqrt(lambda - lambda_start) with 512 * max(1, l) points per unit. Edges are
/// sign changes of |Delta| - 2; interior sign changes of dDelta/dlambda are
/// extrema, which either touch +-2 (adjacent bands share the edge) or poke
/// past it (a gap narrower than the grid). Edges are polished with find_root
/// at the integrator tolerance.
inline BandList spectrum_bands(Potential const& V,
                               double l,
                               double lambda_max,
                               ToleranceSpec const& tol = ToleranceSpec::integrator())
{
    detail::check_cell(V, l);
    double const lambda_start = V.min_value() - 1.0;
    if (!(lambda_max > lambda_start + 1.0))
        throw PreconditionError("spectrum_bands: lambda_max must exceed the bottom of the spectrum");

    ToleranceSpec const scan_tol{std::max(tol.abs_tol, 1e-8), std::max(tol.rel_tol, 1e-8),
                                 tol.max_steps};
    ToleranceSpec const root_tol{std::max(1e-12, 1e-3 * tol.abs_tol), 0.0, 500};
    double const touch_tol = std::max(100.0 * tol.abs_tol, 1e-9);

    auto delta = [&](double lam) { return discriminant(monodromy(V, l, lam, tol)); };
    auto ddelta = [&](double lam) {
        return discriminant_with_derivative(V, l, lam, tol).derivative;
    };

    double const s_max = std::sqrt(lambda_max - lambda_start);
    long const n = static_cast<long>(std::ceil(512.0 * std::max(1.0, l) * s_max)) + 1;
    std::vector<double> lam(static_cast<std::size_t>(n) + 1);
    std::vector<DiscriminantSample> d(lam.size());
    for (long i = 0; i <= n; ++i)
    {
        double const s = s_max * static_cast<double>(i) / static_cast<double>(n);
        lam[i] = i == n ? lambda_max : lambda_start + s * s;
        d[i] = discriminant_with_derivative(V, l, lam[i], scan_tol);
    }

    BandList out;
    out.lambda_max = lambda_max;
    auto inside = [](double v) { return std::abs(v) <= 2.0; };
    auto edge = [&](double a, double b, double sign) {
        return numerics::find_root([&](double x) { return delta(x) - 2.0 * sign; }, a, b, root_tol);
    };
    auto sgn = [](double v) { return v < 0.0 ? -1.0 : 1.0; };

    bool in_band = inside(d[0].value);
    double lower = lam[0];
    if (in_band)
        out.warnings.push_back("scan starts inside a band at lambda=" + detail::fmt(lam[0]));

    for (std::size_t i = 1; i < lam.size(); ++i)
    {
        double const a = lam[i - 1], b = lam[i];
        bool const now_in = inside(d[i].value);
        bool const turned = (d[i - 1].derivative > 0.0) != (d[i].derivative > 0.0);

        if (in_band && now_in && turned)
        {
            // An extremum of Delta inside a run of band samples.
            double const e = numerics::find_root(ddelta, a, b, root_tol);
            double const de = delta(e);
            if (std::abs(de) >= 2.0 + touch_tol)
            {
                out.bands.push_back({lower, edge(a, e, sgn(de))});
                lower = edge(e, b, sgn(de));
            }
            else if (std::abs(de) >= 2.0 - touch_tol)
            {
                out.bands.push_back({lower, e});
                lower = e;
            }
            else
            {
                out.warnings.push_back("extremum of the discriminant inside a band at lambda="
                                       + detail::fmt(e) + " (value " + detail::fmt(de) + ")");
            }
        }
        else if (!in_band && now_in)
        {
            lower = edge(a, b, sgn(d[i - 1].value));
        }
        else if (in_band && !now_in)
        {
            out.bands.push_back({lower, edge(a, b, sgn(d[i].value))});
        }
        else if (!in_band && !now_in)
        {
            if (sgn(d[i - 1].value) != sgn(d[i].value))
            {
                // Delta crossed the whole band between two samples.
                double const s = sgn(d[i - 1].value);
                double const lo = edge(a, b, s);
                double const hi = edge(lo, b, -s);
                out.bands.push_back({lo, hi});
                out.warnings.push_back("band [" + detail::fmt(lo) + ", " + detail::fmt(hi)
                                       + "] narrower than the scan grid");
            }
            else if (turned)
            {
                // Inside a gap |Delta| normally has a maximum; a minimum may
                // dip into the spectrum between samples.
                bool const is_min_of_abs = (d[i - 1].value > 0.0) == (d[i - 1].derivative < 0.0);
                if (is_min_of_abs)
                {
                    double const e = numerics::find_root(ddelta, a, b, root_tol);
                    double const de = delta(e);
                    if (std::abs(de) <= 2.0)
                    {
                        double const s = sgn(d[i - 1].value);
                        double const lo = std::abs(de) < 2.0 ? edge(a, e, s) : e;
                        double const hi = std::abs(de) < 2.0 ? edge(e, b, s) : e;
                        out.bands.push_back({lo, hi});
                        out.warnings.push_back("band [" + detail::fmt(lo) + ", " + detail::fmt(hi)
                                               + "] narrower than the scan grid");
                    }
                }
            }
        }
        in_band = now_in;
    }
    if (in_band)
        out.bands.push_back({lower, lambda_max, true});
    return out;
}

/// The lambda in band band_index (1-based) solving Delta(lambda) = 2 cos(l k).
inline double band_function(Potential const& V,
                            double l,
                            BandList const& bands,
                            int band_index,
                            double k,
                            ToleranceSpec const& tol = ToleranceSpec::integrator())
{
    if (band_index < 1 || static_cast<std::size_t>(band_index) > bands.bands.size())
        throw PreconditionError("band_function: band_index " + std::to_string(band_index)
                                + " exceeds the number of computed bands");
    if (!(k >= 0.0 && k <= std::numbers::pi / l + 1e-15))
        throw DomainError("band_function: k must lie in [0, pi/l]");
    Band const& band = bands.bands[static_cast<std::size_t>(band_index) - 1];
    double const target = 2.0 * std::cos(l * k);
    auto f = [&](double lam) { return discriminant(monodromy(V, l, lam, tol)) - target; };
    double const fa = f(band.lower);
    double const fb = f(band.upper);
    double const touch = std::max(100.0 * tol.abs_tol, 1e-9);
    if (fa == 0.0 || (std::abs(fa) <= touch && std::abs(fa) <= std::abs(fb)))
        return band.lower;
    if (fb == 0.0 || std::abs(fb) <= touch)
        return band.upper;
    if ((fa > 0.0) == (fb > 0.0))
        throw ConvergenceError("band_function: root not bracketed within band "
                                   + std::to_string(band_index),
                               {band.lower, band.upper, fa, fb});
    ToleranceSpec const root_tol{std::max(1e-12, 1e-3 * tol.abs_tol), 0.0, 500};
    return numerics::find_root(f, band.lower, band.upper, root_tol);
}

/// Convenience overload that scans far enough to contain band_index.
inline double band_function(Potential const& V,
                            double l,
                            int band_index,
                            double k,
                            ToleranceSpec const& tol = ToleranceSpec::integrator())
{
    if (band_index < 1)
        throw PreconditionError("band_function: band_index must be >= 1");
    double const scale = std::numbers::pi * (band_index + 1) / l;
    double lambda_max = V.max_value() + scale * scale + 1.0;
    for (;;)
    {
        BandList const bands = spectrum_bands(V, l, lambda_max, tol);
        if (bands.complete_bands() >= static_cast<std::size_t>(band_index))
            return band_function(V, l, bands, band_index, k, tol);
        lambda_max = 2.0 * lambda_max + 10.0;
    }
}

struct BandDiagramPoint
{
    int band_index;
    double k;
    double lambda;
};

/// Samples the first n_bands band functions at n_k points of [0, pi/l].
inline std::vector<BandDiagramPoint> band_diagram(Potential const& V,
                                                  double l,
                                                  BandList const& bands,
                                                  int n_bands,
                                                  int n_k,
                                                  ToleranceSpec const& tol = ToleranceSpec::integrator())
{
    if (n_k < 2)
        throw PreconditionError("band_diagram: need at least two k samples");
    std::vector<BandDiagramPoint> out;
    for (int b = 1; b <= n_bands && static_cast<std::size_t>(b) <= bands.bands.size(); ++b)
    {
        if (bands.bands[b - 1].truncated)
            break;
        for (int j = 0; j < n_k; ++j)
        {
            double const k = std::numbers::pi / l * j / (n_k - 1);
            out.push_back({b, k, band_function(V, l, bands, b, k, tol)});
        }
    }
    return out;
}

}  // namespace hillstat::hill
