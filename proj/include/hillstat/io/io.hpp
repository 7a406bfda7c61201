// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hillstat/ensemble/ensemble.hpp"
#include "hillstat/errors.hpp"
#include "hillstat/hill/bands.hpp"
#include "hillstat/lyapunov/lyapunov.hpp"
#include "hillstat/maps/map.hpp"
#include "hillstat/transfer/density.hpp"
#include "hillstat/transfer/pushforward.hpp"

namespace hillstat::io {

using json = nlohmann::ordered_json;

/// Resolved run configuration, echoed in every output in insertion order.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

/// Round-trip format: 17 significant digits in scientific notation.
inline std::string fmt(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

/// CSV table: '#' comment lines with the config echo, a header row, then rows.
class CsvWriter
{
  public:
    CsvWriter(std::ostream& os, ConfigEcho const& config, std::vector<std::string> const& columns)
        : os_(os)
    {
        for (auto const& [k, v] : config)
            os_ << "# " << k << " = " << v << '\n';
        for (std::size_t i = 0; i < columns.size(); ++i)
            os_ << (i ? "," : "") << columns[i];
        os_ << '\n';
    }

    template <class... Cells>
    void row(Cells const&... cells)
    {
        bool first = true;
        ((os_ << (first ? "" : ",") << cell(cells), first = false), ...);
        os_ << '\n';
    }

  private:
    static std::string cell(double v) { return fmt(v); }
    static std::string cell(std::string const& s) { return s; }
    static std::string cell(char const* s) { return s; }
    template <class I>
        requires std::is_integral_v<I>
    static std::string cell(I v)
    {
        return std::to_string(v);
    }

    std::ostream& os_;
};

inline json config_json(ConfigEcho const& config)
{
    json j = json::object();
    for (auto const& [k, v] : config)
        j[k] = v;
    return j;
}

// JSON has no inf/nan; encode them as strings.
inline json num(double v)
{
    if (std::isfinite(v))
        return v;
    return fmt(v);
}

// ---- hill ----

inline json to_json(hill::BandList const& b)
{
    json bands = json::array();
    for (std::size_t i = 0; i < b.bands.size(); ++i)
        bands.push_back({{"index", i},
                         {"lower", num(b.bands[i].lower)},
                         {"upper", num(b.bands[i].upper)},
                         {"truncated", b.bands[i].truncated}});
    return {{"lambda_max", num(b.lambda_max)}, {"bands", bands}, {"warnings", b.warnings}};
}

inline void write_bands_csv(std::ostream& os, ConfigEcho const& config, hill::BandList const& b)
{
    CsvWriter w(os, config, {"band_index", "lower", "upper", "truncated"});
    for (std::size_t i = 0; i < b.bands.size(); ++i)
        w.row(i, b.bands[i].lower, b.bands[i].upper, b.bands[i].truncated ? 1 : 0);
}

inline void write_band_diagram_csv(std::ostream& os,
                                   ConfigEcho const& config,
                                   std::vector<hill::BandDiagramPoint> const& pts)
{
    CsvWriter w(os, config, {"band_index", "k", "lambda"});
    for (auto const& p : pts)
        w.row(p.band_index, p.k, p.lambda);
}

// ---- maps ----

inline void write_orbit_csv(std::ostream& os, ConfigEcho const& config, maps::Orbit const& orbit)
{
    CsvWriter w(os, config, {"step", "value"});
    for (std::size_t i = 0; i < orbit.values.size(); ++i)
        w.row(i, orbit.values[i]);
}

// ---- transfer ----

inline void write_density_csv(std::ostream& os, ConfigEcho const& config, transfer::StepDensity const& p)
{
    CsvWriter w(os, config, {"edge_left", "edge_right", "value"});
    for (std::size_t i = 0; i < p.cells(); ++i)
        w.row(p.edges()[i], p.edges()[i + 1], p.values()[i]);
}

inline json to_json(transfer::StepDensity const& p)
{
    json edges = json::array(), values = json::array();
    for (double e : p.edges())
        edges.push_back(num(e));
    for (double v : p.values())
        values.push_back(num(v));
    return {{"signed", p.is_signed()}, {"edges", edges}, {"values", values}};
}

inline json to_json(transfer::EvolutionReport const& r)
{
    json recs = json::array();
    for (auto const& e : r.records)
        recs.push_back({{"step", e.step},
                        {"l1_to_invariant", num(e.l1_to_invariant)},
                        {"mass", num(e.mass)},
                        {"resolution", e.resolution},
                        {"exact", e.exact}});
    return {{"m", r.m},
            {"base_resolution", r.base_resolution},
            {"resolution_cap", r.resolution_cap},
            {"records", recs}};
}

// ---- ensemble ----

inline json to_json(ensemble::InitialDistribution const& d)
{
    json j;
    if (d.kind == ensemble::InitialDistribution::Kind::uniform)
        j = {{"kind", "uniform"}, {"lo", d.lo}, {"hi", d.hi}};
    else
        j = {{"kind", "shifted_gamma"}, {"shape", d.shape}, {"scale", d.scale}, {"shift", d.shift}};
    j["truncated_to_domain"] = d.truncated_to_domain;
    j["clamp_to_domain"] = d.clamp_to_domain;
    return j;
}

inline json to_json(ensemble::EnsembleReport const& r)
{
    json d = json::array();
    for (double v : r.distances)
        d.push_back(num(v));
    json j = {{"m", r.m},
              {"n_samples", r.n_samples},
              {"seed", r.seed},
              {"n_iters", r.n_iters},
              {"initial_distribution", to_json(r.dist)},
              {"rejected", r.rejected},
              {"distances", d},
              {"noise_floor", num(r.noise_floor)}};
    j["fitted_slope"] = r.fitted_slope ? num(*r.fitted_slope) : json(nullptr);
    j["fit_range"] = r.fit_range ? json::array({r.fit_range->first, r.fit_range->second}) : json(nullptr);
    if (!r.fit_note.empty())
        j["fit_note"] = r.fit_note;
    return j;
}

inline void write_distances_csv(std::ostream& os, ConfigEcho const& config, ensemble::EnsembleReport const& r)
{
    CsvWriter w(os, config, {"iteration", "wasserstein1"});
    for (std::size_t i = 0; i < r.distances.size(); ++i)
        w.row(i, r.distances[i]);
}

// ---- lyapunov ----

inline json to_json(lyapunov::LyapunovResult const& r)
{
    return {{"m", r.m},
            {"value", num(r.value)},
            {"method", lyapunov::to_string(r.method)},
            {"error_estimate", num(r.error_estimate)},
            {"restarts", r.restarts}};
}

inline void write_integral_sweep_csv(std::ostream& os,
                                     ConfigEcho const& config,
                                     std::vector<lyapunov::IntegralSample> const& s)
{
    CsvWriter w(os, config, {"a", "I"});
    for (auto const& p : s)
        w.row(p.a, p.value);
}

/// JSON document with the config echo under "config" and the payload under "result".
inline void write_json(std::ostream& os, ConfigEcho const& config, json result)
{
    json doc = {{"config", config_json(config)}, {"result", std::move(result)}};
    os << doc.dump(2) << '\n';
}

}  // namespace hillstat::io
