#include "fsim/runner.hpp"

#include <cmath>

#include "fsim/errors.hpp"

namespace fsim {

std::string to_string(RunOutcome o) {
    switch (o) {
        case RunOutcome::completed: return "completed";
        case RunOutcome::diverged: return "diverged";
        case RunOutcome::fp_nonconvergence: return "fp-nonconvergence";
        case RunOutcome::solver_failure: return "solver-failure";
    }
    return "unknown";
}

double TimeSeries::snapshot_spacing() const {
    double spacing = 0.0;
    for (std::size_t i = 1; i < snapshots.size(); ++i) {
        const double d = snapshots[i].t - snapshots[i - 1].t;
        if (d > 0.0 && (spacing == 0.0 || d < spacing)) spacing = d;
    }
    return spacing;
}

int TimeSeries::find_snapshot(double t) const {
    int best = -1;
    double best_d = 0.0;
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        const double d = std::abs(snapshots[i].t - t);
        if (best < 0 || d < best_d) {
            best = static_cast<int>(i);
            best_d = d;
        }
    }
    if (best < 0) return -1;
    const double spacing = snapshot_spacing();
    if (spacing > 0.0 && best_d > 0.5 * spacing + 1e-12) return -1;
    return best;
}

namespace {

void take_snapshot(TimeSeries& ts, const Simulator& sim, const StepInfo* info, bool store_fields) {
    const auto& st = sim.state();
    TimeSeriesEntry e;
    e.t = st.t;
    e.coords = st.solid.cur_coords;
    e.velocities = sim.solid_node_velocities(st.u);
    double sq = 0.0;
    for (const auto& v : e.velocities) sq += dot(v, v);
    e.velocity_norm = std::sqrt(sq);
    if (info) {
        e.div_residual = info->divergence_residual;
        e.fp_iterations = info->fp_iterations;
    }
    if (store_fields) {
        e.u = st.u;
        e.p = st.p;
    }
    ts.snapshots.push_back(std::move(e));
}

} // namespace

TimeSeries run_case(const BenchmarkCase& c, Scheme scheme, const RunOptions& opts) {
    BenchmarkCase run = c;
    run.scheme.scheme = scheme;
    Simulator sim = make_simulator(run);

    TimeSeries ts;
    ts.ref_coords = sim.state().solid.ref_coords;
    ts.triangles = sim.state().solid.triangles;
    ts.background = {run.grid_nx, run.grid_ny, run.domain};

    const int n_steps = static_cast<int>(std::llround(run.scheme.t_end / run.scheme.dt));
    const int every = std::max(1, opts.snapshot_every);

    take_snapshot(ts, sim, nullptr, opts.store_fields);
    for (int step = 1; step <= n_steps; ++step) {
        StepInfo info;
        try {
            info = sim.advance();
        } catch (const FixedPointFailure& e) {
            ts.outcome = RunOutcome::fp_nonconvergence;
            ts.event_step = step;
            ts.event_time = sim.state().t;
            ts.event_detail = e.what();
        } catch (const DivergenceError& e) {
            ts.outcome = RunOutcome::diverged;
            ts.event_step = step;
            ts.event_time = sim.state().t;
            ts.event_detail = e.what();
        } catch (const OutOfDomainError& e) {
            ts.outcome = RunOutcome::diverged;
            ts.event_step = step;
            ts.event_time = sim.state().t;
            ts.event_detail = e.what();
        } catch (const SolverFailure& e) {
            ts.outcome = RunOutcome::solver_failure;
            ts.event_step = step;
            ts.event_time = sim.state().t;
            ts.event_detail = e.what();
        }
        if (ts.outcome != RunOutcome::completed) {
            // State still holds the last healthy step; keep it as the final record.
            take_snapshot(ts, sim, nullptr, opts.store_fields);
            ts.snapshots.back().diverged = true;
            break;
        }
        if (step % every == 0 || step == n_steps) {
            take_snapshot(ts, sim, &info, opts.store_fields);
            if (opts.progress) opts.progress(step, sim.state().t);
        }
    }
    return ts;
}

} // namespace fsim
