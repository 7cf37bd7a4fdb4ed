#include "deba/optimizer.hpp"
#include "deba/rng.hpp"
#include "deba/scenario.hpp"
#include "deba/simulation.hpp"

#include <benchmark/benchmark.h>

#include <filesystem>

namespace {

using namespace deba;

// `wbans` WBANs of eight sensors with simulator-like magnitudes.
EpochState planning_state(int wbans, bool phase2)
{
    Rng rng(7);
    EpochState s;
    s.optimize_phase2 = phase2;
    for (int w = 0; w < wbans; ++w) {
        LmuTerm m;
        m.loss = rng.uniform(0.0, 0.3);
        m.tx_joules_per_bit = rng.uniform(17e-9, 60e-9);
        m.rx_joules_per_bit = 36.1e-9;
        m.energy_initial = 50.0;
        m.energy_residual = rng.uniform(10.0, 50.0);
        m.service_rate = 2e6;
        m.intra_rate = 1e6;
        m.inter_rate = 2e6;
        m.propagation = 3e-6;
        m.critical = rng.bernoulli(0.5);
        double deliverable = 0.0;
        for (int i = 0; i < 8; ++i) {
            SensorTerm t;
            t.lmu = static_cast<std::size_t>(w);
            t.volume = rng.uniform(1e3, 2e5);
            t.loss = rng.uniform(0.0, 0.05);
            t.traffic = t.volume * (1.0 - t.loss);
            t.tx_joules_per_bit = rng.uniform(16.7e-9, 20e-9);
            t.energy_initial = 0.5;
            t.energy_residual = rng.uniform(0.1, 0.5);
            t.weights = {1.0, t.energy_residual / t.energy_initial, rng.uniform(0.5, 1.0), 1.0};
            deliverable += t.traffic;
            s.sensors.push_back(t);
        }
        m.required = deliverable * (1.0 - m.loss) * 0.9;
        s.lmus.push_back(m);
    }
    return s;
}

void BM_Solve(benchmark::State& state)
{
    const auto s = planning_state(static_cast<int>(state.range(0)), true);
    SolverParams p;
    p.max_iterations = 500;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve(s, Constraints{}, p));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Solve)->Arg(10)->Arg(40)->Arg(400)->Unit(benchmark::kMillisecond)->Complexity();

void BM_DeskEpochs(benchmark::State& state)
{
    auto sc = load_scenario(std::filesystem::path(DEBA_SOURCE_DIR) / "scenarios" / "desk.cfg");
    sc.mode = static_cast<Mode>(state.range(0));
    constexpr int kEpochs = 20;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run(sc, kEpochs));
    }
    state.SetItemsProcessed(state.iterations() * kEpochs);
    state.SetLabel(std::string(to_string(sc.mode)));
}
BENCHMARK(BM_DeskEpochs)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
