// Command-line front end: seeded simulation runs, reduced-model runs,
// sign-autoregression fitting, trade-log analytics and raw event-log
// ingestion. Every run writes a manifest tying its outputs to the config
// hash and seed, so results are reproducible byte for byte.

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "alob/analytics.hpp"
#include "alob/dar.hpp"
#include "alob/errors.hpp"
#include "alob/io.hpp"
#include "alob/sim.hpp"

namespace fs = std::filesystem;
using namespace alob;

namespace {

int worker_cap() {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("ALOB_THREADS")) {
        unsigned cap = 0;
        const std::string_view s{env};
        const auto res = std::from_chars(s.data(), s.data() + s.size(), cap);
        if (res.ec == std::errc{} && res.ptr == s.data() + s.size() && cap >= 1)
            n = std::min(n, cap);
    }
    return static_cast<int>(n);
}

std::vector<std::int8_t> signs_of(const sim::TradeLog& log) {
    std::vector<std::int8_t> eps(log.size());
    for (std::size_t i = 0; i < log.size(); ++i) eps[i] = static_cast<std::int8_t>(log[i].eps);
    return eps;
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

// ---- simulate -----------------------------------------------------------

struct SimulateArgs {
    std::vector<std::string> configs;
    std::uint64_t seed = 0;
    std::string out;
};

std::string run_one_simulation(const std::string& config_path, std::uint64_t seed,
                               const std::string& out_dir) {
    std::string raw;
    {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) throw IoError("cannot open \"" + config_path + "\" for reading");
        std::ostringstream ss;
        ss << in.rdbuf();
        raw = std::move(ss).str();
    }
    io::ConfigFile cfg = io::parse_config(raw);
    if (cfg.model != io::ConfigFile::Model::Book)
        throw ValidationError("\"" + config_path +
                              "\" describes the reduced model; use the `reduced` subcommand");
    cfg.book.seed = seed;

    fs::create_directories(out_dir);
    const auto t0 = std::chrono::steady_clock::now();
    const sim::SimResult result = sim::run(cfg.book);
    const std::string trades_path = join_path(out_dir, "trades.csv");
    io::write_trade_log(result.log, trades_path);
    const auto t1 = std::chrono::steady_clock::now();

    io::RunManifest m;
    m.config_hash = io::config_hash(raw);
    m.seed = seed;
    m.version = std::string(io::version());
    m.outputs = {trades_path};
    m.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    io::write_manifest(m, join_path(out_dir, "manifest.json"));

    return "wrote " + trades_path + " (" + std::to_string(result.log.size()) + " trades, " +
           std::to_string(result.stats.recenters) + " recenters)";
}

int cmd_simulate(const SimulateArgs& args) {
    if (args.configs.size() == 1) {
        std::cout << run_one_simulation(args.configs[0], args.seed, args.out) << "\n";
        return 0;
    }
    // Several configs: one subdirectory per config stem, worker pool capped
    // by ALOB_THREADS.
    struct Job {
        std::string config;
        std::string out_dir;
        std::string error;
        int exit_code = 0;
    };
    std::vector<Job> jobs;
    for (const std::string& c : args.configs)
        jobs.push_back({c, join_path(args.out, fs::path(c).stem().string()), {}, 0});

    std::atomic<std::size_t> next{0};
    std::mutex cout_mutex;
    const int n_workers = std::min<int>(worker_cap(), static_cast<int>(jobs.size()));
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) {
        workers.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= jobs.size()) return;
                try {
                    const std::string line =
                        run_one_simulation(jobs[i].config, args.seed, jobs[i].out_dir);
                    const std::lock_guard<std::mutex> guard(cout_mutex);
                    std::cout << line << "\n";
                } catch (const IoError& e) {
                    jobs[i].error = e.what();
                    jobs[i].exit_code = 2;
                } catch (const std::exception& e) {
                    jobs[i].error = e.what();
                    jobs[i].exit_code = 1;
                }
            }
        });
    }
    for (std::thread& t : workers) t.join();

    int rc = 0;
    for (const Job& j : jobs) {
        if (j.exit_code == 0) continue;
        std::cerr << "error: " << j.config << ": " << j.error << "\n";
        rc = std::max(rc, j.exit_code);
    }
    return rc;
}

// ---- reduced ------------------------------------------------------------

struct ReducedArgs {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

int cmd_reduced(const ReducedArgs& args) {
    std::string raw;
    {
        std::ifstream in(args.config, std::ios::binary);
        if (!in) throw IoError("cannot open \"" + args.config + "\" for reading");
        std::ostringstream ss;
        ss << in.rdbuf();
        raw = std::move(ss).str();
    }
    io::ConfigFile cfg = io::parse_config(raw);
    if (cfg.model != io::ConfigFile::Model::Reduced)
        throw ValidationError("\"" + args.config +
                              "\" describes the book model; use the `simulate` subcommand");
    if (args.seed_set) cfg.reduced.seed = args.seed;

    fs::create_directories(args.out);
    const auto t0 = std::chrono::steady_clock::now();
    const sim::ReducedResult result = sim::run_reduced(cfg.reduced);
    const std::string trades_path = join_path(args.out, "trades.csv");
    io::write_reduced_log(result, trades_path);
    const auto t1 = std::chrono::steady_clock::now();

    io::RunManifest m;
    m.config_hash = io::config_hash(raw);
    m.seed = cfg.reduced.seed;
    m.version = std::string(io::version());
    m.outputs = {trades_path};
    m.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    io::write_manifest(m, join_path(args.out, "manifest.json"));

    std::cout << "wrote " << trades_path << " (" << result.eps.size() << " trades)\n";
    return 0;
}

// ---- fit-dar ------------------------------------------------------------

struct FitDarArgs {
    std::string trades;
    int p = 0;
    std::string out;
};

int cmd_fit_dar(const FitDarArgs& args) {
    const sim::TradeLog log = io::read_trade_log(args.trades);
    const std::vector<std::int8_t> eps = signs_of(log);
    const dar::FitResult fit = dar::fit_signs(eps, args.p);

    std::string text = "# smoothed sign-autoregression fit, p = " + std::to_string(args.p) + "\n";
    {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof(buf), fit.params.chi);
        text += "dar_chi=" + std::string(buf, res.ptr) + "\n";
        res = std::to_chars(buf, buf + sizeof(buf), fit.params.mean_innovation);
        text += "dar_mean=" + std::string(buf, res.ptr) + "\n";
        text += "dar_phi=";
        for (std::size_t i = 0; i < fit.params.phi.size(); ++i) {
            res = std::to_chars(buf, buf + sizeof(buf), fit.params.phi[i]);
            if (i > 0) text += ",";
            text += std::string(buf, res.ptr);
        }
        text += "\n";
    }
    if (args.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(args.out, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open \"" + args.out + "\" for writing");
        out << text;
        std::cout << "wrote " << args.out << "\n";
    }
    return 0;
}

// ---- analyze ------------------------------------------------------------

struct AnalyzeArgs {
    std::string trades;
    std::string which;
    std::string out = ".";
    int bins = 20;
    std::int64_t max_lag = 1000;
    int p = 0;           // conditional / inefficiency / propagator predictor order
    std::string horizons = "0,1,2,3,4,5";
    int lmax = 0;        // propagator range; 0 means 2p
    double impact = 0.0; // propagator scale; 0 means estimate from the log
};

// Forecast series for conditioning. With p > 0 a fresh autoregression is
// fitted to the realised signs and the first p records are dropped;
// otherwise the log's own public-forecast column is used as is.
struct Forecasts {
    std::vector<double> hat;      // aligned with `kept`
    std::vector<std::size_t> kept;  // indices into the log
};

Forecasts conditioning_forecasts(const sim::TradeLog& log, int p) {
    Forecasts out;
    if (p <= 0) {
        out.hat.reserve(log.size());
        out.kept.reserve(log.size());
        for (std::size_t i = 0; i < log.size(); ++i) {
            out.hat.push_back(log[i].eps_hat_pub);
            out.kept.push_back(i);
        }
        return out;
    }
    const std::vector<std::int8_t> eps = signs_of(log);
    const dar::FitResult fit = dar::fit_signs(eps, p);
    const auto up = static_cast<std::size_t>(p);
    for (std::size_t n = up; n < eps.size(); ++n) {
        out.hat.push_back(
            dar::predict(fit.params, std::span<const std::int8_t>(&eps[n - up], up)));
        out.kept.push_back(n);
    }
    return out;
}

int cmd_analyze(const AnalyzeArgs& args) {
    const sim::TradeLog log = io::read_trade_log(args.trades);
    fs::create_directories(args.out);

    if (args.which == "signature") {
        const auto n = static_cast<std::int64_t>(log.size());
        const std::int64_t cap = n / 10 - 1;
        if (cap < 1) throw SeriesTooShort("signature: need more than 20 trades");
        const auto lags = analytics::log_spaced_lags(std::min(args.max_lag, cap));
        const auto plot = analytics::signature_plot(log, lags);
        const std::string path = join_path(args.out, "signature.csv");
        io::write_signature(plot, path);
        std::cout << "wrote " << path << "\n";
        return 0;
    }

    if (args.which == "conditional") {
        const Forecasts fc = conditioning_forecasts(log, args.p);
        std::vector<double> hat = fc.hat, x(fc.kept.size()), vb(fc.kept.size()),
                            va(fc.kept.size()), er(fc.kept.size());
        for (std::size_t i = 0; i < fc.kept.size(); ++i) {
            const sim::TradeRecord& t = log[fc.kept[i]];
            x[i] = static_cast<double>(t.eps) * fc.hat[i];
            vb[i] = static_cast<double>(t.v_bid);
            va[i] = static_cast<double>(t.v_ask);
            er[i] = static_cast<double>(t.eps) * t.r;
        }
        const auto write = [&](const char* name, const analytics::ConditionalCurve& c) {
            const std::string path = join_path(args.out, name);
            io::write_curve(c, path);
            std::cout << "wrote " << path << "\n";
        };
        write("volume_bid.csv", analytics::conditional_curve(vb, hat, args.bins));
        write("volume_ask.csv", analytics::conditional_curve(va, hat, args.bins));
        write("response.csv", analytics::conditional_curve(er, x, args.bins));
        return 0;
    }

    if (args.which == "penetration") {
        const auto stats = analytics::penetration_stats(log, args.bins);
        const auto mech = analytics::mechanical_impact_approx(log, args.bins);
        const auto write = [&](const char* name, const analytics::ConditionalCurve& c) {
            const std::string path = join_path(args.out, name);
            io::write_curve(c, path);
            std::cout << "wrote " << path << "\n";
        };
        write("penetration.csv", stats.penetration);
        write("fraction.csv", stats.fraction);
        write("volume.csv", stats.volume);
        write("opposite.csv", stats.opposite);
        write("mech_measured.csv", mech.measured);
        analytics::ConditionalCurve approx = mech.measured;
        approx.mean = mech.approx;
        std::fill(approx.se.begin(), approx.se.end(), 0.0);
        write("mech_approx.csv", approx);
        return 0;
    }

    if (args.which == "inefficiency") {
        if (args.p <= 0)
            throw ValidationError("inefficiency: --p must be positive (predictor order)");
        std::vector<int> horizons;
        {
            std::size_t pos = 0;
            const std::string& s = args.horizons;
            while (pos <= s.size()) {
                auto comma = s.find(',', pos);
                if (comma == std::string::npos) comma = s.size();
                horizons.push_back(std::stoi(s.substr(pos, comma - pos)));
                pos = comma + 1;
            }
        }
        const std::vector<std::int8_t> eps = signs_of(log);
        const dar::FitResult fit = dar::fit_signs(eps, args.p);
        const auto scan = analytics::inefficiency_scan(log, fit.params, horizons, args.bins);

        std::string text = "s,tested_pairs,violations\n";
        for (const auto& h : scan.horizons)
            text += std::to_string(h.s) + "," + std::to_string(h.tested_pairs) + "," +
                    std::to_string(h.violations) + "\n";
        const std::string path = join_path(args.out, "inefficiency.csv");
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open \"" + path + "\" for writing");
        out << text;
        std::cout << "wrote " << path << "\n";
        if (scan.minimal_s >= 0)
            std::cout << "minimal clean horizon: " << scan.minimal_s << "\n";
        else
            std::cout << "no clean horizon among those tested\n";
        return 0;
    }

    if (args.which == "propagator") {
        if (args.p <= 0)
            throw ValidationError("propagator: --p must be positive (predictor order)");
        const std::vector<std::int8_t> eps = signs_of(log);
        const dar::FitResult fit = dar::fit_signs(eps, args.p);
        double impact = args.impact;
        if (impact <= 0.0) {
            // Response model eps*r = A(1 - x): least squares through the origin.
            double num = 0.0, den = 0.0;
            for (const sim::TradeRecord& t : log) {
                const double m = 1.0 - t.x;
                num += static_cast<double>(t.eps) * t.r * m;
                den += m * m;
            }
            if (den <= 0.0) throw DegenerateSeries("propagator: cannot estimate impact scale");
            impact = num / den;
        }
        const int lmax = args.lmax > 0 ? args.lmax : 2 * args.p;
        const auto g = analytics::propagator(fit.params, impact, lmax);

        std::string text = "l,g0\n";
        for (std::size_t i = 0; i < g.size(); ++i) {
            char buf[64];
            const auto res = std::to_chars(buf, buf + sizeof(buf), g[i]);
            text += std::to_string(i + 1) + "," + std::string(buf, res.ptr) + "\n";
        }
        const std::string path = join_path(args.out, "propagator.csv");
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open \"" + path + "\" for writing");
        out << text;
        std::cout << "wrote " << path << " (impact scale " << impact << ")\n";
        return 0;
    }

    throw ValidationError("unknown analysis \"" + args.which + "\"");
}

// ---- ingest -------------------------------------------------------------

struct IngestArgs {
    std::string raw;
    std::string out;
};

int cmd_ingest(const IngestArgs& args) {
    std::string text;
    {
        std::ifstream in(args.raw, std::ios::binary);
        if (!in) throw IoError("cannot open \"" + args.raw + "\" for reading");
        std::ostringstream ss;
        ss << in.rdbuf();
        text = std::move(ss).str();
    }
    // A file already in the trade-log schema passes through unchanged, so
    // ingest(export(log)) is the identity; anything else must be a raw
    // event log.
    const auto first_line = text.substr(0, text.find('\n'));
    sim::TradeLog log;
    io::IngestStats stats;
    if (first_line.rfind("n,t,eps", 0) == 0) {
        log = io::parse_trade_log(text);
        stats.trades_in = stats.trades_out = static_cast<std::int64_t>(log.size());
    } else {
        log = io::ingest(io::parse_event_log(text), &stats);
    }
    io::write_trade_log(log, args.out);
    std::cout << "wrote " << args.out << " (" << stats.trades_out << " trades";
    if (stats.merged_rows > 0) std::cout << ", " << stats.merged_rows << " rows merged";
    if (stats.dropped_rows > 0)
        std::cout << ", " << stats.dropped_rows << " rows dropped (no usable snapshot)";
    std::cout << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"order-book simulation and order-flow statistics toolkit"};
    app.set_version_flag("--version", std::string(io::version()));
    app.require_subcommand(1);

    SimulateArgs sim_args;
    CLI::App* sim_cmd = app.add_subcommand(
        "simulate", "Run the event-driven book simulation for one or more configs");
    sim_cmd->add_option("config", sim_args.configs, "configuration file(s), key=value format")
        ->required()
        ->check(CLI::ExistingFile);
    sim_cmd->add_option("--seed", sim_args.seed, "run seed (mandatory: no wall-clock seeding)")
        ->required();
    sim_cmd
        ->add_option("--out", sim_args.out,
                     "output directory; multiple configs write to <out>/<config-stem>/")
        ->required();

    ReducedArgs red_args;
    CLI::App* red_cmd =
        app.add_subcommand("reduced", "Run the reduced sign-surprise price model");
    red_cmd->add_option("config", red_args.config, "configuration file with model=reduced")
        ->required()
        ->check(CLI::ExistingFile);
    red_cmd->add_option("--out", red_args.out, "output directory")->required();
    CLI::Option* red_seed =
        red_cmd->add_option("--seed", red_args.seed, "override the config seed");

    FitDarArgs fit_args;
    CLI::App* fit_cmd = app.add_subcommand(
        "fit-dar", "Fit a smoothed sign autoregression to a trade log");
    fit_cmd->add_option("trades", fit_args.trades, "trades.csv path")
        ->required()
        ->check(CLI::ExistingFile);
    fit_cmd->add_option("--p", fit_args.p, "autoregression order")
        ->required()
        ->check(CLI::PositiveNumber);
    fit_cmd->add_option("--out", fit_args.out, "output file (default: stdout)");

    AnalyzeArgs an_args;
    CLI::App* an_cmd = app.add_subcommand("analyze", "Compute statistics from a trade log");
    an_cmd->add_option("trades", an_args.trades, "trades.csv path")
        ->required()
        ->check(CLI::ExistingFile);
    an_cmd
        ->add_option("which", an_args.which,
                     "one of: signature, conditional, penetration, inefficiency, propagator")
        ->required()
        ->check(CLI::IsMember(
            {"signature", "conditional", "penetration", "inefficiency", "propagator"}));
    an_cmd->add_option("--out", an_args.out, "output directory (default: current)");
    an_cmd->add_option("--bins", an_args.bins, "conditioning bins (default 20)");
    an_cmd->add_option("--max-lag", an_args.max_lag,
                       "largest signature-plot lag (default 1000, capped at n/10)");
    an_cmd->add_option(
        "--p", an_args.p,
        "predictor order; conditional: 0 reuses the logged forecasts, otherwise refit");
    an_cmd->add_option("--horizons", an_args.horizons,
                       "inefficiency: comma-separated forecast lags (default 0..5)");
    an_cmd->add_option("--lmax", an_args.lmax, "propagator: number of lags (default 2p)");
    an_cmd->add_option("--impact", an_args.impact,
                       "propagator: impact scale (default: estimated from the log)");

    IngestArgs in_args;
    CLI::App* in_cmd = app.add_subcommand(
        "ingest", "Convert a raw quote/trade event log into the trade-log schema");
    in_cmd->add_option("raw", in_args.raw, "raw event log (or an existing trades.csv)")
        ->required()
        ->check(CLI::ExistingFile);
    in_cmd->add_option("--out", in_args.out, "output trades.csv path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(sim_cmd)) return cmd_simulate(sim_args);
        if (app.got_subcommand(red_cmd)) {
            red_args.seed_set = red_seed->count() > 0;
            return cmd_reduced(red_args);
        }
        if (app.got_subcommand(fit_cmd)) return cmd_fit_dar(fit_args);
        if (app.got_subcommand(an_cmd)) return cmd_analyze(an_args);
        if (app.got_subcommand(in_cmd)) return cmd_ingest(in_args);
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
