// Serial reference versus OpenMP kernels on one large random scenario.
// Thread count follows OMP_NUM_THREADS.

#include <random>

#include <benchmark/benchmark.h>

#include "capcalc/kernels.hpp"
#include "support/generators.hpp"

namespace {

const capcalc::Scenario& big_scenario(int states) {
    static std::map<int, capcalc::Scenario> cache;
    auto it = cache.find(states);
    if (it == cache.end()) {
        std::mt19937_64 rng(1);
        capcalc::testing::ScenarioShape shape{states, 8, 24, 2, 100};
        auto d = capcalc::testing::random_scenario(rng, shape);
        while (static_cast<int>(d.states.size()) < states / 2 || d.agents.size() < 4)
            d = capcalc::testing::random_scenario(rng, shape);
        it = cache.emplace(states, capcalc::Scenario::build(std::move(d))).first;
    }
    return it->second;
}

void BM_CapabilityValuesSerial(benchmark::State& state) {
    const auto& s = big_scenario(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(capcalc::capability_values_serial(s));
    state.counters["cells"] = static_cast<double>(s.agent_count() * s.state_count());
}

void BM_CapabilityValuesParallel(benchmark::State& state) {
    const auto& s = big_scenario(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(capcalc::capability_values(s));
    state.counters["cells"] = static_cast<double>(s.agent_count() * s.state_count());
    state.counters["threads"] = capcalc::kernel_threads();
}

}  // namespace

BENCHMARK(BM_CapabilityValuesSerial)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CapabilityValuesParallel)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
