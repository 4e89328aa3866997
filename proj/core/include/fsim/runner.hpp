#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fsim/presets.hpp"

namespace fsim {

enum class RunOutcome { completed, diverged, fp_nonconvergence, solver_failure };

std::string to_string(RunOutcome o);

struct TimeSeriesEntry {
    double t = 0.0;
    std::vector<Vec2> coords;      // solid node coordinates
    std::vector<Vec2> velocities;  // solid node velocities
    double velocity_norm = 0.0;    // l2 norm over solid node velocity vectors
    double div_residual = 0.0;     // ||B u|| after the pressure step
    int fp_iterations = 0;         // implicit scheme only
    bool diverged = false;
    std::vector<double> u;         // background fields (optional, for file output)
    std::vector<double> p;
};

struct BackgroundInfo {
    int nx = 0;
    int ny = 0;
    Rect domain;
};

struct TimeSeries {
    std::vector<TimeSeriesEntry> snapshots;
    std::vector<Vec2> ref_coords;
    std::vector<std::array<int, 3>> triangles;
    BackgroundInfo background;
    RunOutcome outcome = RunOutcome::completed;
    int event_step = -1;
    double event_time = 0.0;
    std::string event_detail;

    double snapshot_spacing() const;
    /// Index of the snapshot nearest t, or -1 if none lies within spacing/2.
    int find_snapshot(double t) const;
};

struct RunOptions {
    int snapshot_every = 100;       // steps between snapshots
    bool store_fields = true;       // keep background u/p per snapshot
    std::function<void(int, double)> progress; // (step, t) after each snapshot
};

/// Drives the splitting integrator to t_end or the first divergence /
/// non-convergence / solver-failure event; failures are recorded outcomes.
TimeSeries run_case(const BenchmarkCase& c, Scheme scheme, const RunOptions& opts = {});
inline TimeSeries run_case(const BenchmarkCase& c, Scheme scheme, int snapshot_every) {
    RunOptions opts;
    opts.snapshot_every = snapshot_every;
    return run_case(c, scheme, opts);
}

} // namespace fsim
