#include <benchmark/benchmark.h>

#include "choicelab/axioms.hpp"
#include "choicelab/verify.hpp"
#include "choicelab/zoo.hpp"

using namespace choicelab;

namespace {

void bm_internal_consistency(benchmark::State& state) {
    const std::size_t m = static_cast<std::size_t>(state.range(0));
    const FeasibleFamily fam = enumerate_menus(make_universe(default_labels(m)));
    detail::Rng rng(7);
    const RiskProfile p = axioms::sample::profile(m, 2, rng);
    const AggregationRule rule = zoo::pooled_mean();
    ChoiceCorrespondence cc;
    for (const Menu& menu : fam) cc.set(menu, rule.choose(p, menu));
    for (auto _ : state) {
        auto verdict = axioms::check_internal_consistency(cc, fam);
        benchmark::DoNotOptimize(verdict.passed);
    }
}
BENCHMARK(bm_internal_consistency)->Arg(4)->Arg(6)->Arg(8);

void bm_dictator_search(benchmark::State& state) {
    const AggregationRule rule = zoo::erm_single(2);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto d = axioms::find_dictator(rule, 3, n);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(bm_dictator_search)->Arg(2)->Arg(3)->Arg(4);

void bm_trace(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto t = verify::trace_decisiveness(n);
        benchmark::DoNotOptimize(t.terminal);
    }
}
BENCHMARK(bm_trace)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void bm_audit(benchmark::State& state) {
    zoo::AuditOptions opt;
    opt.environments = 2;
    opt.samples = static_cast<int>(state.range(0));
    opt.transforms = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto report = zoo::audit(zoo::weighted_sum({1.0, 2.0}), opt);
        benchmark::DoNotOptimize(report.ci.passed);
    }
}
BENCHMARK(bm_audit)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
