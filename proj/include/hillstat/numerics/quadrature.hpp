// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "hillstat/errors.hpp"
#include "hillstat/numerics/tolerance.hpp"

namespace hillstat::numerics {

struct QuadResult
{
    double value = 0.0;
    double error = 0.0;
    long panels = 0;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod abscissae and weights on [-1, 1].
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// One Gauss-Kronrod panel with the QUADPACK error heuristic.
template<class G>
QuadResult gauss_kronrod15(G const& g, double a, double b)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double const center = 0.5 * (a + b);
    double const half = 0.5 * (b - a);
    double const fc = g(center);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);
    double fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j)
    {
        double const dx = half * kXgk[j];
        fv1[j] = g(center - dx);
        fv2[j] = g(center + dx);
        double const sum = fv1[j] + fv2[j];
        resk += kWgk[j] * sum;
        resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1)
            resg += kWg[j / 2] * sum;
    }
    double const reskh = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    QuadResult r;
    r.value = resk * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(50.0 * eps * resabs, err);
    r.error = err;
    r.panels = 1;
    return r;
}

enum class Grading
{
    none,   // plain panel in x
    left,   // x = lo + len * u^2, singular at lo
    right,  // x = hi - len * u^2, singular at hi
};

struct Segment
{
    double lo;
    double hi;
    Grading grading;
};

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b], robust to
/// integrable logarithmic and inverse-square-root singularities at the
/// listed points.
///
/// The interval is split at every singular point; each piece adjacent to a
/// singular point is mapped through x = s +/- len * u^2, which removes
/// x^{-1/2} blow-ups and grades the mesh toward s. The rule never evaluates
/// f at a singular point. Throws ConvergenceError (with the partial estimate
/// and error bound) if more than tol.max_steps panels are needed.
template<class F>
QuadResult integrate_singular(F&& f,
                              double a,
                              double b,
                              std::span<double const> singular_points = {},
                              ToleranceSpec const& tol = ToleranceSpec::quadrature())
{
    using detail::Grading;
    tol.validate();
    if (a == b)
        return {};
    double sign = 1.0;
    if (a > b)
    {
        std::swap(a, b);
        sign = -1.0;
    }

    std::vector<double> sing;
    for (double s : singular_points)
    {
        if (s < a || s > b)
            throw PreconditionError("quad_singular: singular point outside [a, b]");
        sing.push_back(s);
    }
    std::sort(sing.begin(), sing.end());
    sing.erase(std::unique(sing.begin(), sing.end()), sing.end());
    auto is_singular = [&](double x) {
        return std::binary_search(sing.begin(), sing.end(), x);
    };

    std::vector<double> nodes{a};
    for (double s : sing)
        if (s > a && s < b)
            nodes.push_back(s);
    nodes.push_back(b);

    std::vector<detail::Segment> segments;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    {
        double const lo = nodes[i], hi = nodes[i + 1];
        bool const sl = is_singular(lo), sr = is_singular(hi);
        if (sl && sr)
        {
            double const mid = 0.5 * (lo + hi);
            segments.push_back({lo, mid, Grading::left});
            segments.push_back({mid, hi, Grading::right});
        }
        else if (sl)
            segments.push_back({lo, hi, Grading::left});
        else if (sr)
            segments.push_back({lo, hi, Grading::right});
        else
            segments.push_back({lo, hi, Grading::none});
    }

    auto integrand = [&](detail::Segment const& seg) {
        return [&f, seg](double u) -> double {
            double const len = seg.hi - seg.lo;
            switch (seg.grading)
            {
                case Grading::none:
                    return f(u);
                case Grading::left: {
                    double x = seg.lo + len * u * u;
                    if (x <= seg.lo)
                        x = std::nextafter(seg.lo, seg.hi);
                    return f(x) * 2.0 * len * u;
                }
                case Grading::right: {
                    double x = seg.hi - len * u * u;
                    if (x >= seg.hi)
                        x = std::nextafter(seg.hi, seg.lo);
                    return f(x) * 2.0 * len * u;
                }
            }
            return 0.0;
        };
    };

    struct Panel
    {
        std::size_t seg;
        double lo, hi;
        QuadResult r;
    };
    auto cmp = [](Panel const& p, Panel const& q) { return p.r.error < q.r.error; };
    std::vector<Panel> heap;
    auto eval = [&](std::size_t s, double lo, double hi) {
        return Panel{s, lo, hi, detail::gauss_kronrod15(integrand(segments[s]), lo, hi)};
    };

    for (std::size_t s = 0; s < segments.size(); ++s)
    {
        if (segments[s].grading == Grading::none)
        {
            heap.push_back(eval(s, segments[s].lo, segments[s].hi));
        }
        else
        {
            double const grid[] = {0.0, 0.125, 0.25, 0.5, 1.0};
            for (int k = 0; k < 4; ++k)
                heap.push_back(eval(s, grid[k], grid[k + 1]));
        }
    }
    std::make_heap(heap.begin(), heap.end(), cmp);

    auto totals = [&]() {
        QuadResult t;
        for (auto const& p : heap)
        {
            t.value += p.r.value;
            t.error += p.r.error;
        }
        t.panels = static_cast<long>(heap.size());
        return t;
    };

    QuadResult total = totals();
    long since_resum = 0;
    while (total.error > std::max(tol.abs_tol, tol.rel_tol * std::abs(total.value)))
    {
        if (static_cast<long>(heap.size()) >= tol.max_steps)
            throw ConvergenceError("quad_singular: subdivision limit reached", {},
                                   sign * total.value, total.error);
        std::pop_heap(heap.begin(), heap.end(), cmp);
        Panel worst = heap.back();
        heap.pop_back();
        double const mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi))
            throw ConvergenceError("quad_singular: panel width reached roundoff", {},
                                   sign * total.value, total.error);
        Panel left = eval(worst.seg, worst.lo, mid);
        Panel right = eval(worst.seg, mid, worst.hi);
        total.value += left.r.value + right.r.value - worst.r.value;
        total.error += left.r.error + right.r.error - worst.r.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), cmp);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), cmp);
        if (++since_resum == 64)
        {
            total = totals();
            since_resum = 0;
        }
    }
    total = totals();
    total.value *= sign;
    return total;
}

/// Value-only form of integrate_singular.
template<class F>
double quad_singular(F&& f,
                     double a,
                     double b,
                     std::span<double const> singular_points = {},
                     ToleranceSpec const& tol = ToleranceSpec::quadrature())
{
    return integrate_singular(std::forward<F>(f), a, b, singular_points, tol).value;
}

}  // namespace hillstat::numerics
