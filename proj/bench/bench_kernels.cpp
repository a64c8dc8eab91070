// Serial references against the OpenMP kernels: test-set evaluation and the
// energy sweep.

#include <benchmark/benchmark.h>

#include <filesystem>

#include "neusoc/dataset.hpp"
#include "neusoc/energy.hpp"
#include "neusoc/network.hpp"

using namespace neusoc;

namespace {

const Dataset& test_set() {
    static const Dataset ds = [] {
        const std::string path = std::string(NEUSOC_SOURCE_DIR) + "/data/optdigits/optdigits.tes";
        if (std::filesystem::exists(path)) return load_optdigits(path, Split::Test);
        return load_optdigits(std::string(NEUSOC_SOURCE_DIR) + "/tests/fixtures/optdigits_20.csv", Split::Test);
    }();
    return ds;
}

const Network& trained_network() {
    static const Network net = [] {
        NetworkConfig cfg;
        cfg.max_samples = 200;
        Network n(cfg);
        n.train(test_set());
        return n;
    }();
    return net;
}

void BM_EvaluateSerial(benchmark::State& state) {
    const auto& net = trained_network();
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_serial(net, test_set()));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(test_set().size()));
}

void BM_EvaluateParallel(benchmark::State& state) {
    const auto& net = trained_network();
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(net, test_set(), static_cast<int>(state.range(0))));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(test_set().size()));
}

const SweepRange kSweep{1e5, 1e7, 200000, true};

void BM_SweepSerial(benchmark::State& state) {
    const auto base = table_inputs();
    for (auto _ : state) benchmark::DoNotOptimize(sweep_serial(base, SweepAxis::RLrs, kSweep));
    state.SetItemsProcessed(state.iterations() * kSweep.points);
}

void BM_SweepParallel(benchmark::State& state) {
    const auto base = table_inputs();
    for (auto _ : state) benchmark::DoNotOptimize(sweep(base, SweepAxis::RLrs, kSweep));
    state.SetItemsProcessed(state.iterations() * kSweep.points);
}

}  // namespace

BENCHMARK(BM_EvaluateSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EvaluateParallel)->Arg(2)->Arg(4)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
