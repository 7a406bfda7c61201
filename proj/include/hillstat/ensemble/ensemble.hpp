// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hillstat/errors.hpp"
#include "hillstat/maps/map.hpp"
#include "hillstat/transfer/density.hpp"

namespace hillstat::ensemble {

/// Samples per RNG substream and per parallel work item.
inline constexpr std::size_t chunk_size = 1u << 16;

/// W1 statistical floor is noise_floor_c / sqrt(n).
inline constexpr double noise_floor_c = 1.5;

inline std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Engine for substream `chunk` of `seed`.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t chunk)
{
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(chunk + 0x632be59bd9b4e019ULL)));
}

/// Uniform on [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& g) noexcept
{
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

struct InitialDistribution
{
    enum class Kind
    {
        shifted_gamma,
        uniform
    };
    Kind kind = Kind::uniform;
    double shape = 1.0;
    double scale = 1.0;
    double shift = 0.0;
    double lo = -2.0;
    double hi = 2.0;
    /// Rejection-resample values outside [-2, 2].
    bool truncated_to_domain = true;
    /// Clamp values into [-2, 2] instead (only when not truncating).
    bool clamp_to_domain = false;

    static InitialDistribution shifted_gamma(double shape, double scale, double shift, bool truncated = true)
    {
        if (!(shape > 0.0) || !(scale > 0.0) || !std::isfinite(shift))
            throw ConfigError("shifted_gamma: shape and scale must be positive");
        InitialDistribution d;
        d.kind = Kind::shifted_gamma;
        d.shape = shape;
        d.scale = scale;
        d.shift = shift;
        d.truncated_to_domain = truncated;
        return d;
    }

    static InitialDistribution uniform(double lo, double hi, bool truncated = true)
    {
        if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
            throw ConfigError("uniform: need finite lo < hi");
        InitialDistribution d;
        d.kind = Kind::uniform;
        d.lo = lo;
        d.hi = hi;
        d.truncated_to_domain = truncated;
        return d;
    }

    std::string describe() const
    {
        std::ostringstream os;
        os.precision(17);
        if (kind == Kind::uniform)
            os << "uniform(" << lo << "," << hi << ")";
        else
            os << "shifted_gamma(" << shape << "," << scale << "," << shift << ")";
        if (truncated_to_domain)
            os << " truncated";
        else if (clamp_to_domain)
            os << " clamped";
        return os.str();
    }
};

namespace detail {

inline double draw(InitialDistribution const& d, std::mt19937_64& g)
{
    if (d.kind == InitialDistribution::Kind::uniform)
        return d.lo + (d.hi - d.lo) * uniform01(g);
    if (d.shape == 1.0)
        return d.shift - d.scale * std::log1p(-uniform01(g));
    std::gamma_distribution<double> gamma(d.shape, d.scale);
    return d.shift + gamma(g);
}

/// Runs body(chunk) for every chunk on up to `threads` workers. The first
/// exception (by chunk order) is rethrown.
template <class F>
void for_each_chunk(std::size_t n_chunks, unsigned threads, F&& body)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_chunks)));
    if (threads == 1)
    {
        for (std::size_t c = 0; c < n_chunks; ++c)
            body(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t err_chunk = n_chunks;
    std::exception_ptr err;
    auto worker = [&] {
        for (std::size_t c; (c = next.fetch_add(1)) < n_chunks;)
        {
            try
            {
                body(c);
            }
            catch (...)
            {
                std::lock_guard lock(mu);
                if (c < err_chunk)
                {
                    err_chunk = c;
                    err = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (err)
        std::rethrow_exception(err);
}

inline unsigned default_threads()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace detail

struct SampleSet
{
    std::vector<double> values;
    std::size_t rejected = 0;
    std::size_t drawn = 0;
};

/// n samples of `dist`; chunk c of 65536 samples uses substream (seed, c),
/// so the output does not depend on `threads`.
inline SampleSet sample_initial(InitialDistribution const& dist,
                                std::size_t n,
                                std::uint64_t seed,
                                unsigned threads = detail::default_threads())
{
    if (n < 1)
        throw PreconditionError("sample_initial: n must be >= 1");
    std::size_t const n_chunks = (n + chunk_size - 1) / chunk_size;
    SampleSet out;
    out.values.resize(n);
    std::vector<std::size_t> rejected(n_chunks, 0), drawn(n_chunks, 0);
    detail::for_each_chunk(n_chunks, threads, [&](std::size_t c) {
        auto g = substream(seed, c);
        std::size_t const begin = c * chunk_size;
        std::size_t const end = std::min(n, begin + chunk_size);
        std::size_t const want = end - begin;
        // Beyond this many draws the rejection rate necessarily exceeds 50%.
        std::size_t const limit = 2 * want + 64;
        for (std::size_t i = begin; i < end;)
        {
            double x = detail::draw(dist, g);
            ++drawn[c];
            if (dist.truncated_to_domain)
            {
                if (!(x >= -2.0 && x <= 2.0))
                {
                    ++rejected[c];
                    if (drawn[c] > limit)
                        throw ConfigError("sample_initial: rejection rate above 50% for " + dist.describe());
                    continue;
                }
            }
            else if (dist.clamp_to_domain)
                x = std::clamp(x, -2.0, 2.0);
            out.values[i++] = x;
        }
    });
    for (std::size_t c = 0; c < n_chunks; ++c)
    {
        out.rejected += rejected[c];
        out.drawn += drawn[c];
    }
    if (2 * out.rejected > out.drawn)
        throw ConfigError("sample_initial: rejection rate above 50% for " + dist.describe());
    return out;
}

/// W1 between the empirical measure of sorted samples in [-2, 2] and D.
inline double wasserstein1(std::vector<double> const& sorted)
{
    if (sorted.empty())
        throw PreconditionError("wasserstein1: empty sample");
    double const n = static_cast<double>(sorted.size());
    double s = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i)
    {
        double const x = sorted[i];
        if (!(x >= -2.0 && x <= 2.0))
            throw DomainError("wasserstein1: sample outside [-2, 2]");
        s += std::abs(x - transfer::invariant_quantile((static_cast<double>(i) + 0.5) / n));
    }
    return s / n;
}

inline double noise_floor(std::size_t n_samples)
{
    return noise_floor_c / std::sqrt(static_cast<double>(n_samples));
}

/// [1, n*] where n* ends the initial run of distances above 3 * noise_floor.
inline std::pair<int, int> detect_linear_region(std::vector<double> const& distances, double floor)
{
    if (distances.size() < 3)
        throw PreconditionError("detect_linear_region: need at least 3 iterations");
    int last = 0;
    for (std::size_t i = 1; i < distances.size() && distances[i] > 3.0 * floor; ++i)
        last = static_cast<int>(i);
    if (last < 2)
        throw ConvergenceError("detect_linear_region: fewer than 2 points above the noise floor; "
                               "increase the number of samples",
                               distances, std::nan(""), floor);
    return {1, last};
}

/// Least-squares slope of log d_n against n over [first, last].
inline double fit_log_slope(std::vector<double> const& d, std::pair<int, int> range)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (int i = range.first; i <= range.second; ++i, ++k)
    {
        double const y = std::log(d[static_cast<std::size_t>(i)]);
        sx += i;
        sy += y;
        sxx += static_cast<double>(i) * i;
        sxy += i * y;
    }
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

struct EnsembleReport
{
    int m;
    std::size_t n_samples;
    std::uint64_t seed;
    int n_iters;
    InitialDistribution dist;
    std::size_t rejected;
    std::vector<double> distances;
    std::optional<double> fitted_slope;
    std::optional<std::pair<int, int>> fit_range;
    double noise_floor;
    /// Why no slope is reported, if none is.
    std::string fit_note;
};

/// Iterates f_m over the ensemble, recording W1 to D before the first
/// iteration and after each one, then fits the decay slope.
inline EnsembleReport convergence_experiment(int m,
                                             InitialDistribution const& dist,
                                             std::size_t n_samples,
                                             int n_iters,
                                             std::uint64_t seed,
                                             unsigned threads = detail::default_threads())
{
    if (m < 2)
        throw DomainError("convergence_experiment: m must be >= 2");
    if (n_iters < 0)
        throw PreconditionError("convergence_experiment: n_iters must be >= 0");
    auto const map = maps::MapDescriptor::gen_logistic(m);
    auto const& poly = map.polynomial();

    auto samples = sample_initial(dist, n_samples, seed, threads);
    EnsembleReport rep{m, n_samples, seed, n_iters, dist, samples.rejected, {}, {}, {}, noise_floor(n_samples), {}};
    auto& x = samples.values;
    std::size_t const n_chunks = (n_samples + chunk_size - 1) / chunk_size;

    auto escape = [&](int step, double v) {
        std::ostringstream os;
        os.precision(17);
        os << "ensemble escaped [-2, 2] at step " << step << " (value " << v << ") for m=" << m
           << ", dist=" << dist.describe() << ", seed=" << seed;
        return maps::EscapeError(os.str(), step, v);
    };
    for (double v : x)
        if (!(v >= -2.0 && v <= 2.0))
            throw escape(0, v);

    std::vector<double> sorted;
    auto record = [&] {
        sorted = x;
        std::sort(sorted.begin(), sorted.end());
        rep.distances.push_back(wasserstein1(sorted));
    };
    record();
    for (int step = 1; step <= n_iters; ++step)
    {
        detail::for_each_chunk(n_chunks, threads, [&](std::size_t c) {
            std::size_t const end = std::min(n_samples, (c + 1) * chunk_size);
            for (std::size_t i = c * chunk_size; i < end; ++i)
            {
                double const y = poly(x[i]);
                if (!(std::abs(y) <= 2.0 + 1e-9))
                    throw escape(step, y);
                x[i] = std::clamp(y, -2.0, 2.0);
            }
        });
        record();
    }

    if (rep.distances.size() < 3)
    {
        rep.fit_note = "fewer than 2 iterations";
        return rep;
    }
    try
    {
        auto const range = detect_linear_region(rep.distances, rep.noise_floor);
        rep.fit_range = range;
        rep.fitted_slope = fit_log_slope(rep.distances, range);
    }
    catch (ConvergenceError const& e)
    {
        rep.fit_note = e.what();
    }
    return rep;
}

}  // namespace hillstat::ensemble
