// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "hillstat/ensemble/ensemble.hpp"
#include "hillstat/errors.hpp"
#include "hillstat/hill/bands.hpp"
#include "hillstat/hill/potential.hpp"
#include "hillstat/io/io.hpp"
#include "hillstat/lyapunov/lyapunov.hpp"
#include "hillstat/maps/map.hpp"
#include "hillstat/maps/mathieu.hpp"
#include "hillstat/maps/polynomial.hpp"
#include "hillstat/transfer/density.hpp"
#include "hillstat/transfer/mixing.hpp"
#include "hillstat/transfer/pushforward.hpp"

namespace {

using namespace hillstat;
using io::ConfigEcho;
using io::json;

struct Options
{
    // global
    std::string config_file;
    std::string out;
    std::string format;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    bool no_timestamp = false;

    // bands
    std::string potential = "free";
    double amplitude = 1.0;
    double value = 0.0;
    double period = 1.0;
    std::vector<double> breakpoints;
    std::vector<double> values;
    double l = 1.0;
    double lambda_max = 40.0;
    int diagram_bands = 0;
    int diagram_k = 33;

    // maps / ensemble / lyapunov
    std::string map = "gen_logistic";
    int m = 2;
    double r = 4.0;
    double x0 = 0.123456;
    long n = 100;

    // density-evolve
    int steps = 6;
    double lo = -2.0;
    double hi = 2.0;
    std::size_t resolution = 1u << 14;
    std::size_t resolution_cap = 1u << 20;

    // ensemble
    std::size_t samples = 1'000'000;
    int iters = 8;
    std::uint64_t seed = 42;
    std::string dist = "gamma";
    double shape = 1.0;
    double scale = 1.0;
    double shift = -2.0;
    std::string escape_policy = "truncate";

    // lyapunov
    std::string method = "quadrature";

    // integral-sweep
    double a_min = -4.0;
    double a_max = 4.0;
    int points = 161;

    // mathieu
    int n_max = 4;

    // mixing-check
    int level = 2;
};

struct Cli
{
    Options opt;
    std::unique_ptr<CLI::App> app;
    std::map<std::string, CLI::App*> subs;
};

std::unique_ptr<Cli> build_cli()
{
    auto cli = std::make_unique<Cli>();
    auto& o = cli->opt;
    cli->app = std::make_unique<CLI::App>("hillstat: Hill-operator spectra and statistics of Chebyshev-type maps");
    auto& app = *cli->app;
    app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config", o.config_file, "Config file with one 'key = value' per line");
    app.add_option("--out", o.out, "Output file (default: standard output)");
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", o.threads, "Worker threads for ensemble runs")->check(CLI::PositiveNumber);
    app.add_flag("--no-timestamp", o.no_timestamp, "Omit the timestamp from output headers");

    auto* bands = app.add_subcommand("bands", "Spectral bands of a periodic potential");
    bands->add_option("--potential", o.potential)->check(CLI::IsMember({"free", "constant", "cosine", "piecewise"}));
    bands->add_option("--amplitude", o.amplitude, "Cosine amplitude");
    bands->add_option("--value", o.value, "Constant potential value");
    bands->add_option("--period", o.period, "Potential period");
    bands->add_option("--breakpoints", o.breakpoints, "Piecewise-linear breakpoints")->delimiter(',');
    bands->add_option("--values", o.values, "Piecewise-linear values")->delimiter(',');
    bands->add_option("--l", o.l, "Cell length");
    bands->add_option("--lambda-max", o.lambda_max, "Upper end of the scan");
    bands->add_option("--diagram-bands", o.diagram_bands, "Emit a band diagram for this many bands");
    bands->add_option("--diagram-k", o.diagram_k, "k samples per band in the diagram");

    auto* orbit = app.add_subcommand("orbit", "Orbit of a map");
    orbit->add_option("--map", o.map)->check(CLI::IsMember({"logistic", "gen_logistic", "tent", "fold", "chebyshev"}));
    orbit->add_option("--m", o.m, "Degree");
    orbit->add_option("--r", o.r, "Logistic parameter");
    orbit->add_option("--x0", o.x0, "Initial point");
    orbit->add_option("--n", o.n, "Iterations");

    auto* evolve = app.add_subcommand("density-evolve", "Transfer-operator evolution of a uniform density under f_m");
    evolve->add_option("--m", o.m, "Degree");
    evolve->add_option("--steps", o.steps, "Transfer steps");
    evolve->add_option("--lo", o.lo, "Support of the initial uniform density");
    evolve->add_option("--hi", o.hi, "Support of the initial uniform density");
    evolve->add_option("--resolution", o.resolution, "Base kappa-grid resolution");
    evolve->add_option("--resolution-cap", o.resolution_cap, "Largest kappa-grid resolution");

    auto* ens = app.add_subcommand("ensemble", "Monte Carlo convergence experiment");
    ens->add_option("--m", o.m, "Degree");
    ens->add_option("--samples", o.samples, "Ensemble size");
    ens->add_option("--iters", o.iters, "Iterations");
    ens->add_option("--seed", o.seed, "RNG seed");
    ens->add_option("--dist", o.dist)->check(CLI::IsMember({"gamma", "uniform"}));
    ens->add_option("--shape", o.shape, "Gamma shape");
    ens->add_option("--scale", o.scale, "Gamma scale");
    ens->add_option("--shift", o.shift, "Gamma shift");
    ens->add_option("--lo", o.lo, "Uniform lower end");
    ens->add_option("--hi", o.hi, "Uniform upper end");
    ens->add_option("--escape-policy", o.escape_policy, "Initial samples outside [-2, 2]")
        ->check(CLI::IsMember({"truncate", "clamp", "none"}));

    auto* lyap = app.add_subcommand("lyapunov", "Lyapunov exponent");
    lyap->add_option("--m", o.m, "Degree");
    lyap->add_option("--method", o.method)->check(CLI::IsMember({"quadrature", "orbit", "tent"}));
    lyap->add_option("--x0", o.x0, "Orbit start");
    lyap->add_option("--n", o.n, "Orbit length");

    auto* sweep = app.add_subcommand("integral-sweep", "Tabulate I(a)");
    sweep->add_option("--a-min", o.a_min);
    sweep->add_option("--a-max", o.a_max);
    sweep->add_option("--points", o.points)->check(CLI::PositiveNumber);

    auto* mathieu = app.add_subcommand("mathieu", "Logistic orbit from Mathieu monodromies");
    mathieu->add_option("--x0", o.x0, "Initial point in [0, 1]");
    mathieu->add_option("--n-max", o.n_max, "Largest step compared");

    auto* mixing = app.add_subcommand("mixing-check", "Exact mixing correlations of m-adic intervals");
    mixing->add_option("--m", o.m, "Tent degree");
    mixing->add_option("--level", o.level, "m-adic resolution of A and B");
    mixing->add_option("--n", o.n, "Iterations");

    auto* coeffs = app.add_subcommand("coeffs", "Coefficients of f_m, highest degree first");
    coeffs->add_option("--m", o.m, "Degree");

    for (auto* s : {bands, orbit, evolve, ens, lyap, sweep, mathieu, mixing, coeffs})
        cli->subs[s->get_name()] = s;
    return cli;
}

std::string trim(std::string s)
{
    auto const b = s.find_first_not_of(" \t\r");
    auto const e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

// Reads 'key = value' lines ('#' starts a comment).
std::vector<std::pair<std::string, std::string>> read_config(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file " + path);
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno)
    {
        line = trim(line.substr(0, line.find('#')));
        if (line.empty())
            continue;
        auto const eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

// Turns config entries into flags placed before the command-line flags of
// the same scope, so explicit flags win.
std::vector<std::string> config_tokens(CLI::App const& scope,
                                       std::vector<std::pair<std::string, std::string>> const& entries)
{
    std::vector<std::string> tokens;
    for (auto const& [key, value] : entries)
    {
        auto const* opt = scope.get_option_no_throw("--" + key);
        if (!opt || key == "config")
            continue;
        if (opt->get_expected_max() == 0)
        {
            if (value == "true" || value == "1")
                tokens.push_back("--" + key);
            else if (value != "false" && value != "0")
                throw ConfigError("config key '" + key + "' expects true or false");
        }
        else
        {
            tokens.push_back("--" + key);
            tokens.push_back(value);
        }
    }
    return tokens;
}

ConfigEcho resolve_echo(CLI::App const& app, CLI::App const& sub, Options const& o)
{
    ConfigEcho echo{{"subcommand", sub.get_name()}};
    auto add = [&](CLI::App const& scope) {
        for (auto const* opt : scope.get_options())
        {
            auto const name = opt->get_single_name();
            if (name == "help" || name == "config" || name.empty())
                continue;
            std::string v;
            if (opt->get_expected_max() == 0)
                v = opt->count() > 0 ? "true" : "false";
            else if (opt->count() == 0)
                v = opt->get_default_str();
            else if (opt->get_expected_max() > 1)
            {
                auto const& res = opt->results();
                for (std::size_t i = 0; i < res.size(); ++i)
                    v += (i ? "," : "") + res[i];
            }
            else
                v = opt->results().back();
            echo.emplace_back(name, v);
        }
    };
    add(app);
    add(sub);
    if (!o.config_file.empty())
        echo.emplace_back("config_file", o.config_file);
    if (!o.no_timestamp)
    {
        auto const now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        echo.emplace_back("timestamp", buf);
    }
    return echo;
}

class Sink
{
  public:
    Sink(Options const& o, std::string default_format)
        : format_(o.format.empty() ? default_format : o.format)
    {
        if (o.out.empty())
            return;
        std::filesystem::path p(o.out);
        if (p.is_relative())
            if (char const* dir = std::getenv("HILLSTAT_OUTPUT_DIR"); dir && *dir)
                p = std::filesystem::path(dir) / p;
        if (o.format.empty())
        {
            if (p.extension() == ".json")
                format_ = "json";
            else if (p.extension() == ".csv")
                format_ = "csv";
        }
        if (p.has_parent_path())
            std::filesystem::create_directories(p.parent_path());
        file_.open(p);
        if (!file_)
            throw ConfigError("cannot open output file " + p.string());
    }

    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
    bool json() const { return format_ == "json"; }

  private:
    std::string format_;
    std::ofstream file_;
};

hill::Potential make_potential(Options const& o)
{
    if (o.potential == "free")
        return hill::Potential::free(o.period);
    if (o.potential == "constant")
        return hill::Potential::constant(o.value, o.period);
    if (o.potential == "cosine")
        return hill::Potential::cosine(o.amplitude, 1.0 / o.period);
    return hill::Potential::piecewise_linear(o.period, o.breakpoints, o.values);
}

maps::MapDescriptor make_map(Options const& o)
{
    if (o.map == "logistic")
        return maps::MapDescriptor::logistic(o.r);
    if (o.map == "tent")
        return maps::MapDescriptor::tent(o.m);
    if (o.map == "fold")
        return maps::MapDescriptor::fold(o.m);
    if (o.map == "chebyshev")
        return maps::MapDescriptor::chebyshev(o.m);
    return maps::MapDescriptor::gen_logistic(o.m);
}

void cmd_bands(Options const& o, ConfigEcho const& echo)
{
    Sink sink(o, "csv");
    auto const V = make_potential(o);
    auto const b = hill::spectrum_bands(V, o.l, o.lambda_max);
    std::vector<hill::BandDiagramPoint> diagram;
    if (o.diagram_bands > 0)
        diagram = hill::band_diagram(V, o.l, b, o.diagram_bands, o.diagram_k);
    if (sink.json())
    {
        json r = io::to_json(b);
        if (!diagram.empty())
        {
            json d = json::array();
            for (auto const& p : diagram)
                d.push_back({{"band_index", p.band_index}, {"k", p.k}, {"lambda", p.lambda}});
            r["diagram"] = d;
        }
        io::write_json(sink.stream(), echo, r);
    }
    else if (!diagram.empty())
        io::write_band_diagram_csv(sink.stream(), echo, diagram);
    else
        io::write_bands_csv(sink.stream(), echo, b);
    for (auto const& w : b.warnings)
        std::cerr << "warning: " << w << '\n';
}

void cmd_orbit(Options const& o, ConfigEcho const& echo)
{
    Sink sink(o, "csv");
    auto const orbit = maps::iterate(make_map(o), o.x0, o.n);
    if (sink.json())
        io::write_json(sink.stream(), echo, {{"map", orbit.map.name()}, {"x0", orbit.x0}, {"values", orbit.values}});
    else
        io::write_orbit_csv(sink.stream(), echo, orbit);
}

void cmd_density_evolve(Options const& o, ConfigEcho const& echo)
{
    Sink sink(o, "json");
    if (!(o.lo >= -2.0 && o.lo < o.hi && o.hi <= 2.0))
        throw DomainError("density-evolve: need -2 <= lo < hi <= 2");
    std::vector<double> edges{o.lo, o.hi}, vals{1.0 / (o.hi - o.lo)};
    if (o.lo > -2.0)
    {
        edges.insert(edges.begin(), -2.0);
        vals.insert(vals.begin(), 0.0);
    }
    if (o.hi < 2.0)
    {
        edges.push_back(2.0);
        vals.push_back(0.0);
    }
    auto const p0 = transfer::StepDensity::density(edges, vals);
    auto const rep = transfer::evolve_genlogistic(p0, o.m, o.steps, o.resolution, o.resolution_cap);
    if (sink.json())
        io::write_json(sink.stream(), echo, io::to_json(rep));
    else
    {
        io::CsvWriter w(sink.stream(), echo, {"step", "l1_to_invariant", "mass", "resolution", "exact"});
        for (auto const& e : rep.records)
            w.row(e.step, e.l1_to_invariant, e.mass, e.resolution, e.exact ? 1 : 0);
    }
}

void cmd_ensemble(Options const& o, ConfigEcho const& echo)
{
    Sink sink(o, "json");
    bool const truncate = o.escape_policy == "truncate";
    auto dist = o.dist == "uniform" ? ensemble::InitialDistribution::uniform(o.lo, o.hi, truncate)
                                    : ensemble::InitialDistribution::shifted_gamma(o.shape, o.scale, o.shift, truncate);
    dist.clamp_to_domain = o.escape_policy == "clamp";
    auto const rep = ensemble::convergence_experiment(o.m, dist, o.samples, o.iters, o.seed, o.threads);
    if (sink.json())
        io::write_json(sink.stream(), echo, io::to_json(rep));
    else
        io::write_distances_csv(sink.stream(), echo, rep);
    if (!rep.fit_note.empty())
        std::cerr << "note: " << rep.fit_note << '\n';
}

void cmd_lyapunov(Options const& o, ConfigEcho const& echo)
{
    Sink sink(o, "json");
    lyapunov::LyapunovResult r{};
    if (o.method == "quadrature")
        r = lyapunov::average_lyapunov_quadrature(o.m);
    else if (o.method == "orbit")
        r = lyapunov::average_lyapunov_orbit(o.m, o.x0, o.n);
    else
        r = lyapunov::lyapunov_tent(o.m);
    if (sink.json())
    {
        json j = io::to_json(r);
        j["log_m"] = std::log(static_cast<double>(o.m));
        io::write_json(sink.stream(), echo, j);
    }
    else
    {
        io::CsvWriter w(sink.stream(), echo, {"m", "method", "value", "error_estimate", "restarts"});
        w.row(r.m, lyapunov::to_string(r.method), r.value, r.error_estimate, r.restarts);
    }
}

void cmd_integral_sweep(Options const& o, ConfigEcho const& echo)
{
    Sink sink(o, "csv");
    auto const s = lyapunov::I_sweep(o.a_min, o.a_max, o.points);
    if (sink.json())
    {
        json rows = json::array();
        for (auto const& p : s)
            rows.push_back({{"a", p.a}, {"I", p.value}});
        io::write_json(sink.stream(), echo, rows);
    }
    else
        io::write_integral_sweep_csv(sink.stream(), echo, s);
}

void cmd_mathieu(Options const& o, ConfigEcho const& echo)
{
    Sink sink(o, "csv");
    maps::MathieuPipeline const p;
    auto const direct = maps::iterate(maps::MapDescriptor::logistic(4.0), o.x0, o.n_max);
    if (sink.json())
    {
        json rows = json::array();
        for (int n = 0; n <= o.n_max; ++n)
        {
            double const v = p.value(o.x0, n);
            rows.push_back({{"n", n}, {"mathieu", v}, {"direct", direct.values[n]},
                            {"abs_diff", std::abs(v - direct.values[n])}});
        }
        io::write_json(sink.stream(), echo,
                       {{"lambda0", p.lambda0()}, {"lambda_star", p.lambda_star()}, {"table", rows}});
        return;
    }
    auto e = echo;
    e.emplace_back("lambda0", io::fmt(p.lambda0()));
    e.emplace_back("lambda_star", io::fmt(p.lambda_star()));
    io::CsvWriter w(sink.stream(), e, {"n", "mathieu", "direct", "abs_diff"});
    for (int n = 0; n <= o.n_max; ++n)
    {
        double const v = p.value(o.x0, n);
        w.row(n, v, direct.values[n], std::abs(v - direct.values[n]));
    }
}

void cmd_mixing_check(Options const& o, ConfigEcho const& echo)
{
    Sink sink(o, "csv");
    if (o.m < 2 || o.level < 0 || o.n < 0)
        throw DomainError("mixing-check: need m >= 2, level >= 0, n >= 0");
    std::int64_t cells = 1;
    for (int i = 0; i < o.level; ++i)
        cells *= o.m;
    if (cells > 256)
        throw ConfigError("mixing-check: m^level above 256 pairs limit");
    struct Row
    {
        std::int64_t a, b;
        maps::Rational c;
    };
    std::vector<Row> rows;
    bool all_zero = true;
    for (std::int64_t a = 0; a < cells; ++a)
        for (std::int64_t b = 0; b < cells; ++b)
        {
            transfer::RationalInterval A{maps::Rational(a, cells), maps::Rational(a + 1, cells)};
            transfer::RationalInterval B{maps::Rational(b, cells), maps::Rational(b + 1, cells)};
            auto const c = transfer::mixing_correlation(o.m, static_cast<int>(o.n), A, B);
            all_zero = all_zero && c == maps::Rational(0);
            rows.push_back({a, b, c});
        }
    if (sink.json())
    {
        json r = json::array();
        for (auto const& row : rows)
            r.push_back({{"a_index", row.a}, {"b_index", row.b}, {"correlation", row.c.str()}});
        io::write_json(sink.stream(), echo, {{"all_zero", all_zero}, {"pairs", r}});
    }
    else
    {
        io::CsvWriter w(sink.stream(), echo, {"a_index", "b_index", "correlation"});
        for (auto const& row : rows)
            w.row(row.a, row.b, row.c.str());
    }
    std::cerr << (all_zero ? "all correlations exactly zero\n" : "nonzero correlations present\n");
}

void cmd_coeffs(Options const& o)
{
    auto const c = maps::gen_logistic_coeffs_exact(o.m);
    for (std::size_t i = 0; i < c.size(); ++i)
        std::cout << (i ? " " : "") << c[i];
    std::cout << '\n';
}

int dispatch(Cli const& cli)
{
    auto const& o = cli.opt;
    CLI::App const* sub = cli.app->get_subcommands().front();
    auto const echo = resolve_echo(*cli.app, *sub, o);
    auto const& name = sub->get_name();
    if (name == "bands")
        cmd_bands(o, echo);
    else if (name == "orbit")
        cmd_orbit(o, echo);
    else if (name == "density-evolve")
        cmd_density_evolve(o, echo);
    else if (name == "ensemble")
        cmd_ensemble(o, echo);
    else if (name == "lyapunov")
        cmd_lyapunov(o, echo);
    else if (name == "integral-sweep")
        cmd_integral_sweep(o, echo);
    else if (name == "mathieu")
        cmd_mathieu(o, echo);
    else if (name == "mixing-check")
        cmd_mixing_check(o, echo);
    else
        cmd_coeffs(o);
    return 0;
}

int run(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    auto cli = build_cli();
    try
    {
        cli->app->parse(std::vector<std::string>(args.rbegin(), args.rend()));
        if (!cli->opt.config_file.empty())
        {
            auto const entries = read_config(cli->opt.config_file);
            CLI::App const* sub = cli->app->get_subcommands().front();
            for (auto const& [key, value] : entries)
                if (!sub->get_option_no_throw("--" + key) && !cli->app->get_option_no_throw("--" + key))
                    throw ConfigError("unknown config key '" + key + "' for subcommand " + sub->get_name());
            auto const global = config_tokens(*cli->app, entries);
            auto const local = config_tokens(*sub, entries);
            auto const pos = std::find(args.begin(), args.end(), sub->get_name()) - args.begin();
            std::vector<std::string> merged(global);
            merged.insert(merged.end(), args.begin(), args.begin() + pos + 1);
            merged.insert(merged.end(), local.begin(), local.end());
            merged.insert(merged.end(), args.begin() + pos + 1, args.end());
            cli = build_cli();
            cli->app->parse(std::vector<std::string>(merged.rbegin(), merged.rend()));
        }
    }
    catch (CLI::ParseError const& e)
    {
        int const code = cli->app->exit(e);
        return code == 0 ? 0 : 1;
    }
    catch (Error const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    try
    {
        return dispatch(*cli);
    }
    catch (ConvergenceError const& e)
    {
        std::cerr << "non-convergence: " << e.what() << '\n';
        return 2;
    }
    catch (Error const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv)
{
    return run(argc, argv);
}
