// Command-line driver for the immersed FSI benchmarks: runs a configured case,
// compares stored runs, and lists the preset registry.

#include <atomic>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>

#include "fsim/config.hpp"
#include "fsim/errors.hpp"
#include "fsim/metrics.hpp"
#include "fsim/output.hpp"
#include "fsim/runner.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

enum ExitCode : int {
    exit_ok = 0,
    exit_error = 1,
    exit_config = 2,
    exit_divergence = 3,
    exit_fp_nonconvergence = 4,
    exit_solver_failure = 5,
};

int outcome_code(fsim::RunOutcome o) {
    switch (o) {
        case fsim::RunOutcome::completed: return exit_ok;
        case fsim::RunOutcome::diverged: return exit_divergence;
        case fsim::RunOutcome::fp_nonconvergence: return exit_fp_nonconvergence;
        case fsim::RunOutcome::solver_failure: return exit_solver_failure;
    }
    return exit_error;
}

struct RunArgs {
    std::string config_path;
    std::string scheme;
    double dt = 0.0;
    double t_end = -1.0;
    std::string out_dir = "out";
    int snapshot_every = 100;
    int threads = 1;
};

int do_run(const RunArgs& args) {
    fsim::BenchmarkCase bench = fsim::parse_config(args.config_path);
    if (!args.scheme.empty()) {
        const auto s = fsim::scheme_from_string(args.scheme);
        if (!s) {
            std::cerr << "error: unknown scheme '" << args.scheme << "'\n";
            return exit_config;
        }
        bench.scheme.scheme = *s;
    }
    if (args.dt > 0.0) bench.scheme.dt = args.dt;
    if (args.t_end >= 0.0) bench.scheme.t_end = args.t_end;
    bench.scheme.validate();

#ifdef _OPENMP
    omp_set_num_threads(std::max(1, args.threads));
#endif

    std::printf("case %s  scheme %s  dt=%g  t_end=%g  grid %dx%d\n", bench.name.c_str(),
                fsim::to_string(bench.scheme.scheme).c_str(), bench.scheme.dt, bench.scheme.t_end,
                bench.grid_nx, bench.grid_ny);

    fsim::RunOptions opts;
    opts.snapshot_every = args.snapshot_every;
    opts.progress = [](int step, double t) {
        std::printf("  step %d  t=%.4f\n", step, t);
        std::fflush(stdout);
    };
    const auto series = fsim::run_case(bench, bench.scheme.scheme, opts);
    fsim::write_outputs(series, args.out_dir);

    if (series.outcome != fsim::RunOutcome::completed) {
        std::printf("run ended early: %s at step %d (t=%.6g)\n  %s\n",
                    fsim::to_string(series.outcome).c_str(), series.event_step, series.event_time,
                    series.event_detail.c_str());
    } else {
        std::printf("run completed: %zu snapshots, final solid velocity norm %.6g\n",
                    series.snapshots.size(), series.snapshots.back().velocity_norm);
    }
    std::printf("outputs written to %s\n", args.out_dir.c_str());
    return outcome_code(series.outcome);
}

int do_compare(const std::string& dir_a, const std::string& dir_b, const std::string& metric,
               double t) {
    const auto a = fsim::read_outputs(dir_a);
    const auto b = fsim::read_outputs(dir_b);
    double value = 0.0;
    if (metric == "velocity")
        value = fsim::metric_relative_diff(a, b, t);
    else if (metric == "displacement")
        value = fsim::metric_displacement_diff(a, b, t);
    else {
        std::cerr << "error: metric must be 'velocity' or 'displacement'\n";
        return exit_config;
    }
    std::printf("%s\n", fsim::format_17(value).c_str());
    return exit_ok;
}

int do_sweep(const std::vector<std::string>& configs, int jobs) {
    std::atomic<int> next{0};
    std::atomic<int> worst{exit_ok};
    std::mutex print_mutex;
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= static_cast<int>(configs.size())) return;
            int code = exit_error;
            std::string what;
            try {
                RunArgs args;
                args.config_path = configs[i];
                args.out_dir = "sweep_" + std::to_string(i);
                code = do_run(args);
            } catch (const std::exception& e) {
                what = e.what();
            }
            std::lock_guard<std::mutex> lock(print_mutex);
            if (!what.empty()) std::cerr << configs[i] << ": " << what << "\n";
            int cur = worst.load();
            while (code > cur && !worst.compare_exchange_weak(cur, code)) {
            }
        }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < std::max(1, jobs); ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return worst.load();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Immersed FSI benchmark driver: explicit/implicit IFEM and one-field FDM"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run one benchmark case");
    run->add_option("--config", run_args.config_path, "key = value config file")->required();
    run->add_option("--scheme", run_args.scheme,
                    "explicit-ifem | implicit-ifem | one-field-fdm (overrides config)");
    run->add_option("--dt", run_args.dt, "time step override");
    run->add_option("--t-end", run_args.t_end, "horizon override");
    run->add_option("--out", run_args.out_dir, "output directory");
    run->add_option("--snapshot-every", run_args.snapshot_every, "steps between snapshots");
    run->add_option("--threads", run_args.threads, "matvec threads (OpenMP builds)");

    std::string dir_a, dir_b, metric = "velocity";
    double compare_t = 0.0;
    auto* compare = app.add_subcommand("compare", "Compare two stored runs");
    compare->add_option("--a", dir_a, "first run directory")->required();
    compare->add_option("--b", dir_b, "second run directory (reference is --a)")->required();
    compare->add_option("--metric", metric, "velocity | displacement");
    compare->add_option("--t", compare_t, "snapshot time")->required();

    auto* presets = app.add_subcommand("presets", "List the preset registry");

    std::vector<std::string> sweep_configs;
    int sweep_jobs = 2;
    auto* sweep = app.add_subcommand("sweep", "Run several configs in a worker pool");
    sweep->add_option("--configs", sweep_configs, "config files")->required();
    sweep->add_option("--jobs", sweep_jobs, "parallel workers");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? exit_config : exit_ok;
    }

    try {
        if (run->parsed()) return do_run(run_args);
        if (compare->parsed()) return do_compare(dir_a, dir_b, metric, compare_t);
        if (sweep->parsed()) return do_sweep(sweep_configs, sweep_jobs);
        if (presets->parsed()) {
            for (const auto& name : fsim::preset_names()) std::printf("%s\n", name.c_str());
            return exit_ok;
        }
    } catch (const fsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_error;
    }
    return exit_ok;
}
