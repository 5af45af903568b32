// eife: run, converge and bench front end.
#include "eife/analysis.hpp"
#include "eife/config.hpp"
#include "eife/errors.hpp"
#include "eife/output.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

eife::RunConfig load(const Options& opt) {
    eife::RunConfig cfg = eife::load_config(opt.config);
    if (opt.seed) cfg.seed = *opt.seed;
    return cfg;
}

fs::path output_dir(const Options& opt) {
    fs::path dir(opt.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw eife::IoError("cannot create output directory '" + opt.out + "': " + ec.message());
    return dir;
}

void print_report(const eife::StudyReport& report) {
    std::cout << eife::report_csv(report);
}

int cmd_run(const Options& opt) {
    const eife::RunConfig cfg = load(opt);
    const eife::Problem problem = cfg.make_problem();
    const eife::TensorMesh mesh = cfg.make_mesh(problem);
    const std::size_t steps = cfg.steps(problem);
    const double t_end = cfg.terminal_time(problem);

    eife::SchemeConfig scheme;
    scheme.scheme = cfg.scheme;
    scheme.c2 = cfg.c2;
    scheme.final_time = t_end;
    scheme.dt = steps ? t_end / static_cast<double>(steps) : 1.0;

    std::set<std::size_t> snapshot_steps;
    for (double ts : cfg.snapshot_times) {
        if (ts < 0.0 || ts > t_end * (1.0 + 1e-12)) {
            throw eife::ConfigError("output.snapshot_times: " + std::to_string(ts) + " outside [0, T]");
        }
        snapshot_steps.insert(static_cast<std::size_t>(std::llround(ts / scheme.dt)));
    }
    const std::size_t cadence = cfg.observer_cadence(steps);
    const fs::path dir = output_dir(opt);

    eife::SeriesRecorder recorder(cfg.norms);
    const eife::Observer record = recorder.observer();
    std::vector<eife::Observer> observers;
    observers.push_back([&](const eife::Observation& obs) {
        const bool on_cadence = obs.step % cadence == 0 || obs.step == steps;
        if (on_cadence) record(obs);
        if (snapshot_steps.count(obs.step)) {
            char name[32];
            std::snprintf(name, sizeof name, "_%06zu.vtk", obs.step);
            eife::write_snapshot(obs.u_nodal, obs.mesh, obs.problem, obs.t,
                                 (dir / (cfg.snapshot_prefix + name)).string());
        }
        if (on_cadence && !opt.quiet) {
            const auto& row = recorder.rows().back();
            std::cerr << "step " << row.step << " t=" << eife::format_number(row.t)
                      << " sup=" << eife::format_number(row.sup_norm);
            if (row.energy) std::cerr << " energy=" << eife::format_number(*row.energy);
            if (row.err_l2) std::cerr << " err_l2=" << eife::format_number(*row.err_l2);
            std::cerr << '\n';
        }
    });

    eife::RunOptions run;
    run.initial = cfg.initial;
    run.load = cfg.load;
    // Snapshots may fall between cadence multiples, so observe every step and filter.
    run.cadence = snapshot_steps.empty() ? cadence : 1;
    const eife::RunResult result = eife::run(problem, mesh, scheme, observers, run);
    eife::write_series_csv(recorder.rows(), (dir / cfg.series_file).string());
    if (!opt.quiet) {
        std::cout << "steps " << result.steps << ", " << eife::format_number(result.seconds_per_step)
                  << " s/step, final sup " << eife::format_number(eife::sup_norm(result.u_nodal)) << '\n';
    }
    return 0;
}

int cmd_study(const Options& opt, bool timing) {
    const eife::RunConfig cfg = load(opt);
    const eife::Problem problem = cfg.make_problem();
    const eife::StudySpec spec = cfg.make_study(problem);
    const eife::StudyReport report = timing ? eife::timing_study(spec) : eife::convergence_study(spec);
    const fs::path dir = output_dir(opt);
    eife::write_report_csv(report, (dir / cfg.report_file).string());
    if (!opt.quiet) print_report(report);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exponential integrator finite element solver for semilinear parabolic problems"};
    app.require_subcommand(1);
    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "Config file")->required();
        sub->add_option("--out", opt.out, "Output directory");
        sub->add_option("--seed", opt.seed, "Override the random seed");
        sub->add_flag("--quiet", opt.quiet, "Suppress progress output");
    };
    CLI::App* run = app.add_subcommand("run", "Single simulation with time series and snapshots");
    CLI::App* converge = app.add_subcommand("converge", "Convergence study over a mesh or time-step ladder");
    CLI::App* bench = app.add_subcommand("bench", "Time-per-step study over a mesh ladder");
    for (CLI::App* sub : {run, converge, bench}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(opt);
        if (converge->parsed()) return cmd_study(opt, false);
        return cmd_study(opt, true);
    } catch (const eife::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const eife::DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
