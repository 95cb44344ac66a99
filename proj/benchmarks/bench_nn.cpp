#include <benchmark/benchmark.h>

#include "slris/train.hpp"

using namespace slris;

namespace {

std::vector<IqWindow> batch_of(std::size_t n, std::size_t len) {
    std::vector<IqWindow> batch;
    Rng root(3);
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng = root.split(i);
        batch.push_back(make_window(kAllSignalClasses[i % 4], len, 10.0, desired_signature(),
                                    interferer_signature(), rng));
    }
    return batch;
}

}  // namespace

static void BM_Forward(benchmark::State& state) {
    CnnShape shape;
    shape.window_len = static_cast<std::size_t>(state.range(0));
    const CnnModel model = CnnModel::random_init(shape, 5);
    const auto batch = batch_of(1, shape.window_len);
    for (auto _ : state) {
        auto posterior = predict(model, batch[0]);
        benchmark::DoNotOptimize(posterior.data());
    }
}
BENCHMARK(BM_Forward)->Arg(32)->Arg(128)->Arg(512);

static void BM_BackwardBatch64(benchmark::State& state) {
    CnnShape shape;
    shape.window_len = static_cast<std::size_t>(state.range(0));
    const CnnModel model = CnnModel::random_init(shape, 7);
    const auto batch = batch_of(64, shape.window_len);
    for (auto _ : state) {
        auto grads = backward(model, batch);
        benchmark::DoNotOptimize(grads.data());
    }
    state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_BackwardBatch64)->Arg(32)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
