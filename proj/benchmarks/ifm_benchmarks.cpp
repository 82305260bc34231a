// Copyright 2026 The IFM Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "ifm/fields.hpp"
#include "ifm/matter_mz.hpp"
#include "ifm/photon_mz.hpp"
#include "ifm/protocol.hpp"
#include "ifm/rng.hpp"

namespace {

using namespace ifm;

TestParticle electron() { return {-4.8e-10, 9.11e-28, Vec3::Zero(), Vec3(1.0e8, 0.0, 0.0)}; }

void BM_EvTrials(benchmark::State& state) {
    EvSetup setup;
    setup.object_present = true;
    RngStream rng(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_ev_trials(setup, state.range(0), rng));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvTrials)->Arg(1'000)->Arg(100'000);

void BM_ZenoDistribution(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(zeno_ifm_distribution(static_cast<int>(state.range(0)), true));
    }
}
BENCHMARK(BM_ZenoDistribution)->Arg(8)->Arg(64)->Arg(1024);

void BM_Rk4Trajectory(benchmark::State& state) {
    const FieldSource charge{PointCharge{1e-5}, Vec3(5.0, 1.0, 0.0)};
    const double dt = 1e-10 / static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_trajectory(electron(), charge, 10.0, dt));
    }
}
BENCHMARK(BM_Rk4Trajectory)->Arg(1)->Arg(10)->Unit(benchmark::kMicrosecond);

void BM_CriticalDistance(benchmark::State& state) {
    const FieldSource charge{PointCharge{1e-5}, Vec3::Zero()};
    BeamLine beam;
    beam.anchor = Vec3(5.0, 0.0, 0.0);
    beam.exit_plane_x = 10.0;
    beam.dt = 1e-10;
    for (auto _ : state) {
        benchmark::DoNotOptimize(critical_distance(electron(), charge, beam, 1e-3, {0.2, 20.0}));
    }
}
BENCHMARK(BM_CriticalDistance)->Unit(benchmark::kMillisecond);

void BM_ElectricFieldScan(benchmark::State& state) {
    InterferometerModel model;
    model.g1 = model.g2 = model.g3 = GratingSpec::from_orders(1.0 / 3, 1.0 / 3, 1.0 / 3);
    model = with_ideal_offset(model);
    ScanGeometry geometry;
    geometry.beam.anchor = Vec3(5.0, 0.0, 0.0);
    geometry.beam.exit_plane_x = 10.0;
    geometry.beam.dt = 1e-10;
    ScanConfig config;
    for (double d = 20.0; d > 0.2; d *= 0.85) config.positions.push_back(d);
    config.phi_c = 1e-3;
    config.trials_per_position = state.range(0);
    config.cage_transit_time = 1e-7;
    const FieldSource charge{PointCharge{1e-5}, Vec3::Zero()};
    std::uint64_t seed = 0;
    for (auto _ : state) {
        config.seed = ++seed;
        benchmark::DoNotOptimize(run_field_scan(model, charge, electron(), geometry, config));
    }
}
BENCHMARK(BM_ElectricFieldScan)->Arg(100)->Arg(10'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
