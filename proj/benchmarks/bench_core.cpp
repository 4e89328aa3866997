// Microbenchmarks for the hot paths of the time loop: background assembly,
// transfer-map rebuilds, solid-term assembly, and whole steps per scheme.

#include <benchmark/benchmark.h>

#include "fsim/coupling.hpp"
#include "fsim/fem.hpp"
#include "fsim/presets.hpp"

using namespace fsim;

namespace {

BenchmarkCase cavity_case(Scheme scheme) {
    auto c = preset("cavity-1");
    c.scheme.scheme = scheme;
    return c;
}

void BM_AssembleMass(benchmark::State& state) {
    const auto bg = build_background_grid(40, 40, Rect::unit());
    for (auto _ : state) benchmark::DoNotOptimize(assemble_mass(bg));
}
BENCHMARK(BM_AssembleMass)->Unit(benchmark::kMillisecond);

void BM_TransferMapRebuild(benchmark::State& state) {
    const auto bg = build_background_grid(40, 40, Rect::unit());
    const auto disc = build_disc_mesh({0.6, 0.5}, 0.2, 1373);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_transfer_map(bg, disc, triangle_3pt()));
}
BENCHMARK(BM_TransferMapRebuild)->Unit(benchmark::kMillisecond);

void BM_FdmLhsAssembly(benchmark::State& state) {
    const auto bg = build_background_grid(40, 40, Rect::unit());
    const auto disc = build_disc_mesh({0.6, 0.5}, 0.2, 1373);
    const auto map = build_transfer_map(bg, disc, triangle_3pt());
    const auto vp = build_velocity_pattern(bg);
    SolidState st(map.size());
    for (int k = 0; k < st.size(); ++k) {
        st.s[k] = 0.01 * Mat2::identity();
        st.grad_u[k] = Mat2::identity();
    }
    FsiParams params{100.0, 2.0, 1.5, 1.0};
    CsrMatrix A(vp.pattern);
    for (auto _ : state) {
        A.set_zero();
        benchmark::DoNotOptimize(add_fdm_lhs(map, disc, st, params, 5e-3, vp, A));
    }
}
BENCHMARK(BM_FdmLhsAssembly)->Unit(benchmark::kMillisecond);

void BM_CavityStep(benchmark::State& state, Scheme scheme) {
    auto sim = make_simulator(cavity_case(scheme));
    for (auto _ : state) sim.advance();
}
BENCHMARK_CAPTURE(BM_CavityStep, explicit_ifem, Scheme::explicit_ifem)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_CavityStep, one_field_fdm, Scheme::one_field_fdm)
    ->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
