#include <benchmark/benchmark.h>

#include "slris/dataset.hpp"

using namespace slris;

static void BM_MakeWindow(benchmark::State& state) {
    const auto len = static_cast<std::size_t>(state.range(0));
    Rng rng(1);
    for (auto _ : state) {
        IqWindow w = make_window(SignalClass::Both, len, 10.0, desired_signature(),
                                 interferer_signature(), rng);
        benchmark::DoNotOptimize(w.samples.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(len));
}
BENCHMARK(BM_MakeWindow)->Arg(32)->Arg(128)->Arg(512);

static void BM_BuildDataset(benchmark::State& state) {
    for (auto _ : state) {
        auto ds = build_dataset(64, 128, {0.0, 20.0}, desired_signature(),
                                interferer_signature(), 7);
        benchmark::DoNotOptimize(ds.windows.data());
    }
}
BENCHMARK(BM_BuildDataset);
