// gravphase: batch front-end for the weak-field gravitational phase toolkit.
//
//   gravphase <subcommand> [--config <path>] [--out <dir>]
//
// Subcommands: gauge-check, cow, drop, rindler, gr, fit, sweep, report.
// Exit codes: 0 all checks pass, 1 physics/validation failure, 2 I/O failure.
// GRAVPHASE_THREADS caps the sweep fan-out.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "gravphase/acceptance.hpp"
#include "gravphase/config.hpp"
#include "gravphase/interferometer.hpp"
#include "gravphase/phases.hpp"
#include "gravphase/qdynamics.hpp"
#include "gravphase/text.hpp"
#include "gravphase/units.hpp"

namespace gp = gravphase;
namespace fs = std::filesystem;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_io = 2;

gp::RunConfig load_config_or_exit(const std::string& path) {
    if (path.empty()) return gp::RunConfig{};
    std::ifstream is(path);
    if (!is) {
        std::cerr << "error: cannot read config file '" << path << "'\n";
        std::exit(exit_io);
    }
    std::stringstream buf;
    buf << is.rdbuf();
    const gp::ParseResult parsed = gp::parse_config(buf.str());
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors)
            std::cerr << path << ":" << e.line << ": " << e.message << "\n";
        std::exit(exit_check_failed);
    }
    return parsed.config;
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        std::cerr << "error: cannot create output directory '" << dir.string()
                  << "'\n";
        std::exit(exit_io);
    }
    const fs::path p = dir / name;
    std::ofstream os(p);
    if (!os) {
        std::cerr << "error: cannot open '" << p.string() << "' for writing\n";
        std::exit(exit_io);
    }
    return os;
}

std::size_t thread_budget() {
    if (const char* env = std::getenv("GRAVPHASE_THREADS")) {
        const auto v = gp::parse_int(env);
        if (v && *v >= 1) return static_cast<std::size_t>(*v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

gp::Protocol protocol_from(const gp::RunConfig& cfg) {
    gp::Protocol proto;
    proto.params = cfg.params;
    proto.d = cfg.d;
    proto.sigma = cfg.resolve_sigma();
    proto.method = cfg.method;
    proto.t_samples = cfg.resolve_times();
    proto.grid.n = cfg.n;
    proto.grid.x_min = cfg.x_min;
    proto.grid.x_max = cfg.x_max;
    return proto;
}

int cmd_drop(const gp::RunConfig& cfg, const fs::path& out) {
    const gp::PhaseSeries series = gp::run_protocol(protocol_from(cfg));
    auto os = open_output(out, std::string("drop_") + gp::method_name(cfg.method) +
                                   ".csv");
    gp::write_phase_series_csv(series, os);
    std::cout << "drop: " << series.times.size() << " samples, method "
              << gp::method_name(series.method) << ", last phase "
              << gp::g17(series.phases_unwrapped.back()) << " rad\n";
    return exit_ok;
}

int cmd_cow(const gp::RunConfig& cfg, const fs::path& out) {
    gp::PhaseSeries series;
    series.method = gp::Method::analytic;
    series.fall_time = 0.0;
    for (double t : cfg.resolve_times()) {
        series.times.push_back(t);
        series.phases_unwrapped.push_back(
            gp::cow_phase(cfg.params, cfg.resolve_delta_h(), t));
        series.phases_raw.push_back(gp::wrap_phase(series.phases_unwrapped.back()));
        series.overlap_mag.push_back(1.0);
    }
    auto os = open_output(out, "cow.csv");
    gp::write_phase_series_csv(series, os);
    std::cout << "cow: " << series.times.size() << " samples, last phase "
              << gp::g17(series.phases_unwrapped.back()) << " rad\n";
    return exit_ok;
}

int cmd_rindler(const gp::RunConfig& cfg, const fs::path& out) {
    auto os = open_output(out, "rindler.csv");
    os << "t,t_prime,delta,cubic_phase_rad\n";
    for (double t : cfg.resolve_times()) {
        const double tp = gp::rindler_time(cfg.params, cfg.a, t);
        os << gp::g17(t) << ',' << gp::g17(tp) << ',' << gp::g17(t - tp) << ','
           << gp::g17(gp::rindler_cubic_phase(cfg.params, cfg.a, t)) << '\n';
    }
    if (!os) {
        std::cerr << "error: write failed\n";
        return exit_io;
    }
    std::cout << "rindler: a = " << gp::g17(cfg.a) << ", table written\n";
    return exit_ok;
}

int cmd_gr(const gp::RunConfig& cfg, const fs::path& out) {
    const gp::GrPhaseBudget b =
        gp::gr_budget(cfg.params, cfg.x, cfg.resolve_delta_h(), cfg.tau);
    auto os = open_output(out, "gr.csv");
    os << "x,delta_h,tau,dt_exact,dt_series,newtonian_rad,gr_rad,omega_rad_per_s\n"
       << gp::g17(cfg.x) << ',' << gp::g17(cfg.resolve_delta_h()) << ','
       << gp::g17(cfg.tau) << ',' << gp::g17(b.dt_exact) << ','
       << gp::g17(b.dt_series) << ',' << gp::g17(b.newtonian_term) << ','
       << gp::g17(b.gr_term) << ',' << gp::g17(b.omega) << '\n';
    std::cout << "gr: dt_exact " << gp::g17(b.dt_exact) << " s, dt_series "
              << gp::g17(b.dt_series) << " s, newtonian "
              << gp::g17(b.newtonian_term) << " rad, gr "
              << gp::g17(b.gr_term) << " rad\n";
    return exit_ok;
}

int cmd_gauge_check(const gp::RunConfig& cfg) {
    // run non-dimensionalized so any preset lands on an O(1) grid
    const gp::ScaleSystem s = gp::build_scales(cfg.params, cfg.d);
    const gp::PhysParams q = gp::to_dimensionless(cfg.params, s);
    const double sigma = cfg.sigma ? *cfg.sigma / s.L0 : 0.35;
    const double t = cfg.t ? *cfg.t / s.T0 : 0.8;  // fall time maps to 1
    const gp::Grid grid{-64.0, 64.0, cfg.n};
    const gp::GaugeCheckResult r =
        gp::check_gauge_equivalence(q, grid, cfg.x0, cfg.p0, sigma, t);

    const bool pass =
        r.fidelity >= 1.0 - cfg.tol_fidelity && std::abs(r.phase) <= cfg.tol_phase;
    std::cout << "gauge-check: fidelity " << gp::g17(r.fidelity)
              << " (need >= " << gp::g17(1.0 - cfg.tol_fidelity) << "), phase "
              << gp::g17(r.phase) << " rad (need <= " << gp::g17(cfg.tol_phase)
              << "), " << r.steps << " steps per leg: "
              << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? exit_ok : exit_check_failed;
}

int cmd_fit(const gp::RunConfig& cfg, const fs::path& out) {
    const gp::PhaseSeries series = gp::run_protocol(protocol_from(cfg));
    const gp::CubicFit cubic = gp::fit_cubic(series);
    const gp::CubicFit quad = gp::fit_quadratic(series);
    const double ratio = gp::t3_significance(cubic, quad);

    auto os = open_output(out, std::string("fit_") + gp::method_name(cfg.method) +
                                   ".csv");
    os << "method,c0,c1,c2,c3,rms_residual,condition,t3_ratio\n"
       << gp::method_name(cfg.method) << ',' << gp::g17(cubic.c0) << ','
       << gp::g17(cubic.c1) << ',' << gp::g17(cubic.c2) << ','
       << gp::g17(cubic.c3) << ',' << gp::g17(cubic.rms_residual) << ','
       << gp::g17(cubic.condition) << ',' << gp::g17(ratio) << '\n';
    auto os2 = open_output(out, std::string("fit_series_") +
                                    gp::method_name(cfg.method) + ".csv");
    gp::write_phase_series_csv(series, os2);

    std::cout << "fit (" << gp::method_name(cfg.method) << "): c1 "
              << gp::g17(cubic.c1) << ", c3 " << gp::g17(cubic.c3) << ", rms "
              << gp::g17(cubic.rms_residual) << ", t3 ratio " << gp::g17(ratio)
              << "\n";
    return exit_ok;
}

int cmd_sweep(const gp::RunConfig& cfg, const fs::path& out) {
    struct Task {
        double mass;
        gp::Method method;
    };
    std::vector<Task> tasks;
    for (double m : cfg.masses)
        for (gp::Method method : {gp::Method::analytic, gp::Method::wavepacket})
            tasks.push_back({m, method});

    struct Outcome {
        gp::PhaseSeries series;
        gp::CubicFit fit;
    };
    std::vector<Outcome> outcomes(tasks.size());

    auto run_task = [&](std::size_t i) {
        gp::RunConfig c = cfg;
        c.params.m = tasks[i].mass;
        c.method = tasks[i].method;
        Outcome o;
        o.series = gp::run_protocol(protocol_from(c));
        o.fit = gp::fit_cubic(o.series);
        return o;
    };

    // independent runs fan out; one collector writes in deterministic order
    const std::size_t width = std::min(thread_budget(), tasks.size());
    for (std::size_t base = 0; base < tasks.size(); base += width) {
        std::vector<std::future<Outcome>> batch;
        const std::size_t end = std::min(base + width, tasks.size());
        for (std::size_t i = base; i < end; ++i)
            batch.push_back(std::async(std::launch::async, run_task, i));
        for (std::size_t i = base; i < end; ++i)
            outcomes[i] = batch[i - base].get();
    }

    auto summary = open_output(out, "sweep_summary.csv");
    summary << "mass,method,c1,c3,rms_residual\n";
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        std::ostringstream name;
        name << "sweep_m" << i / 2 << "_" << gp::method_name(tasks[i].method)
             << ".csv";
        auto os = open_output(out, name.str());
        gp::write_phase_series_csv(outcomes[i].series, os);
        summary << gp::g17(tasks[i].mass) << ',' << gp::method_name(tasks[i].method)
                << ',' << gp::g17(outcomes[i].fit.c1) << ','
                << gp::g17(outcomes[i].fit.c3) << ','
                << gp::g17(outcomes[i].fit.rms_residual) << '\n';
    }
    std::cout << "sweep: " << tasks.size() << " runs over " << cfg.masses.size()
              << " masses\n";
    return exit_ok;
}

int cmd_report(const gp::RunConfig& cfg, const std::string& only) {
    gp::AcceptanceOptions opt;
    opt.tol_fidelity = cfg.tol_fidelity;
    opt.tol_phase = cfg.tol_phase;
    opt.tol_method_agree = cfg.tol_method_agree;
    opt.tol_c3 = cfg.tol_c3;
    if (!only.empty()) {
        for (auto part : gp::split(only, ',')) {
            const auto v = gp::parse_int(part);
            if (!v || *v < 1 || *v > 8) {
                std::cerr << "error: --only wants criterion indices 1..8\n";
                return exit_check_failed;
            }
            opt.only.push_back(static_cast<int>(*v));
        }
    }
    const auto results = gp::run_acceptance(opt);
    gp::print_acceptance(results, std::cout);
    return gp::all_passed(results) ? exit_ok : exit_check_failed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weak-field gravitational phase toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    app.add_option("--config", config_path, "key=value config file")
        ->envname("GRAVPHASE_CONFIG");
    app.add_option("--out", out_dir, "output directory for CSV artifacts");

    auto* sc_gauge = app.add_subcommand(
        "gauge-check", "direct vs gauge-mapped evolution, prints fidelity/phase");
    auto* sc_cow = app.add_subcommand("cow", "two-height phase table");
    auto* sc_drop = app.add_subcommand("drop", "drop-interferometer phase series");
    auto* sc_rindler =
        app.add_subcommand("rindler", "accelerated-frame time table");
    auto* sc_gr = app.add_subcommand("gr", "clock-rate budget between two heights");
    auto* sc_fit = app.add_subcommand("fit", "cubic fit of the phase series");
    auto* sc_sweep = app.add_subcommand("sweep", "mass sweep with fits");
    auto* sc_report =
        app.add_subcommand("report", "run the full verification suite");
    std::string only;
    sc_report->add_option("--only", only, "comma-separated criterion indices");

    CLI11_PARSE(app, argc, argv);

    try {
        const gp::RunConfig cfg = load_config_or_exit(config_path);
        const fs::path out{out_dir};
        if (sc_gauge->parsed()) return cmd_gauge_check(cfg);
        if (sc_cow->parsed()) return cmd_cow(cfg, out);
        if (sc_drop->parsed()) return cmd_drop(cfg, out);
        if (sc_rindler->parsed()) return cmd_rindler(cfg, out);
        if (sc_gr->parsed()) return cmd_gr(cfg, out);
        if (sc_fit->parsed()) return cmd_fit(cfg, out);
        if (sc_sweep->parsed()) return cmd_sweep(cfg, out);
        if (sc_report->parsed()) return cmd_report(cfg, only);
    } catch (const gp::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const gp::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_check_failed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_check_failed;
    }
    return exit_ok;
}
