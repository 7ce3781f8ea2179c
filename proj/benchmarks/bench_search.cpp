#include <benchmark/benchmark.h>

#include "choicelab/verify.hpp"

using namespace choicelab;

namespace {

void configure(verify::SearchOptions& opt, int environments, bool prune) {
    opt.environments = environments;
    opt.prune = prune;
    opt.crosscheck_samples = 0;  // isolate the search itself
}

void bm_search_pruned(benchmark::State& state) {
    verify::SearchOptions opt;
    configure(opt, static_cast<int>(state.range(0)), true);
    for (auto _ : state) {
        auto report = verify::search_survivors(opt);
        benchmark::DoNotOptimize(report.survivor_count);
        state.counters["nodes"] = static_cast<double>(report.nodes_explored);
    }
}
BENCHMARK(bm_search_pruned)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void bm_search_unpruned(benchmark::State& state) {
    verify::SearchOptions opt;
    configure(opt, static_cast<int>(state.range(0)), false);
    for (auto _ : state) {
        auto report = verify::search_survivors(opt);
        benchmark::DoNotOptimize(report.survivor_count);
        state.counters["nodes"] = static_cast<double>(report.nodes_explored);
    }
}
BENCHMARK(bm_search_unpruned)->Arg(2)->Unit(benchmark::kMillisecond);

void bm_search_with_ci(benchmark::State& state) {
    verify::SearchOptions opt;
    configure(opt, static_cast<int>(state.range(0)), true);
    opt.axioms.ci = true;
    for (auto _ : state) {
        auto report = verify::search_survivors(opt);
        benchmark::DoNotOptimize(report.survivor_count);
    }
}
BENCHMARK(bm_search_with_ci)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void bm_table_enumeration(benchmark::State& state) {
    const int environments = static_cast<int>(state.range(0));
    for (auto _ : state) {
        std::uint64_t count = 0;
        verify::for_each_pairwise_table(environments, true,
                                        [&](const verify::PairwiseTable&) { ++count; });
        benchmark::DoNotOptimize(count);
    }
}
BENCHMARK(bm_table_enumeration)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
