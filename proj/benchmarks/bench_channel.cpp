#include <benchmark/benchmark.h>

#include "slris/controller.hpp"

using namespace slris;

static void BM_Sinr(benchmark::State& state) {
    ScenarioParams p;
    p.ris_count = static_cast<std::size_t>(state.range(0));
    p.theta_deg = 60.0;
    const Layout layout = make_layout(p);
    const RisStateVector states = RisStateVector::all_on(p.ris_count);
    for (auto _ : state) {
        auto breakdown = sinr(p, layout, states);
        benchmark::DoNotOptimize(breakdown.sinr_db);
    }
}
BENCHMARK(BM_Sinr)->Arg(1)->Arg(4)->Arg(16);

static void BM_GreedyStates(benchmark::State& state) {
    ScenarioParams p;
    p.ris_count = static_cast<std::size_t>(state.range(0));
    p.theta_deg = 35.0;
    const Layout layout = make_layout(p);
    for (auto _ : state) {
        auto states = greedy_states(p, layout);
        benchmark::DoNotOptimize(states.on);
    }
}
BENCHMARK(BM_GreedyStates)->Arg(1)->Arg(4)->Arg(10);

static void BM_OracleStates(benchmark::State& state) {
    ScenarioParams p;
    p.ris_count = static_cast<std::size_t>(state.range(0));
    p.theta_deg = 35.0;
    const Layout layout = make_layout(p);
    for (auto _ : state) {
        auto states = oracle_states(p, layout);
        benchmark::DoNotOptimize(states.on);
    }
}
BENCHMARK(BM_OracleStates)->Arg(1)->Arg(4)->Arg(10);
