#include "powprofit/analytic.hpp"
#include "powprofit/markov.hpp"
#include "powprofit/sim.hpp"

#include <benchmark/benchmark.h>

using namespace powprofit;

static void BM_SmCycleAutomaton(benchmark::State& state)
{
    MinerParams m{state.range(0) / 100.0, 0.5};
    sim::RunRng rng(1, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sim::sm_cycle_automaton(rng, m, 600.0, 1.0));
    }
}
BENCHMARK(BM_SmCycleAutomaton)->Arg(10)->Arg(30)->Arg(45);

static void BM_SimRun(benchmark::State& state)
{
    sim::SimConfig cfg;
    cfg.params = {0.1, 0.9};
    cfg.strategy = Strategy(state.range(0));
    cfg.proto = {600.0, 144, 1.0};
    cfg.n_periods = 4;
    cfg.n_runs = 10;
    cfg.seed = 7;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sim::run(cfg));
    }
}
BENCHMARK(BM_SimRun)
    ->Arg(int(Strategy::HM))
    ->Arg(int(Strategy::SM))
    ->Arg(int(Strategy::ISM))
    ->Arg(int(Strategy::ANM));

static void BM_MarkovStationary(benchmark::State& state)
{
    MinerParams m{0.3, 0.5};
    for (auto _ : state) {
        benchmark::DoNotOptimize(markov::stationary(markov::build_chain(m, int(state.range(0)))));
    }
}
BENCHMARK(BM_MarkovStationary)->Arg(50)->Arg(100)->Arg(200);

static void BM_DominanceMap(benchmark::State& state)
{
    std::vector<double> qs, gs;
    for (int i = 1; i <= state.range(0); ++i) qs.push_back(0.49 * i / (state.range(0) + 1));
    for (int i = 0; i <= 10; ++i) gs.push_back(i / 10.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(analytic::dominance_map(qs, gs));
    }
}
BENCHMARK(BM_DominanceMap)->Arg(20)->Arg(50);

BENCHMARK_MAIN();
