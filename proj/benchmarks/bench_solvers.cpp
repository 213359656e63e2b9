// Microbenchmarks for the closed-form solvers, the sweep, and the
// brute-force oracles.

#include <benchmark/benchmark.h>

#include <vector>

#include "dermarket/equilibrium_full.hpp"
#include "dermarket/equilibrium_restricted.hpp"
#include "dermarket/oracle.hpp"
#include "dermarket/sweep.hpp"
#include "dermarket/welfare.hpp"

namespace {

using namespace dermarket;

Scenario two_prosumer_scenario(int generators) {
    std::vector<Prosumer> prosumers(2);
    prosumers[0] = {-0.1, 10.0, 10.0, 0};
    prosumers[1] = {-0.1, 10.0, 30.0, 0};
    return Scenario::validate_and_build(std::move(prosumers), {generators, 5.0});
}

// Deterministic scenario with `count` prosumers spanning a range of
// curvatures, slopes, and capacities; prosumer 0 is always an eager buyer so
// the instance is valid at marginal cost 5.
Scenario synthetic_scenario(int count, int generators) {
    std::vector<Prosumer> prosumers(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double t = count > 1 ? static_cast<double>(i) / (count - 1) : 0.0;
        prosumers[static_cast<std::size_t>(i)] = {-0.05 - 0.4 * t, 9.0 + 8.0 * t,
                                                  1.0 + 35.0 * t, 0};
    }
    return Scenario::validate_and_build(std::move(prosumers), {generators, 5.0});
}

void BM_SolveAllModels(benchmark::State& state) {
    const Scenario s = two_prosumer_scenario(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_full_truthful(s));
        benchmark::DoNotOptimize(solve_full_strategic(s));
        benchmark::DoNotOptimize(solve_restricted_truthful(s));
        benchmark::DoNotOptimize(solve_restricted_strategic(s));
    }
}
BENCHMARK(BM_SolveAllModels);

void BM_RestrictedStrategicByProsumerCount(benchmark::State& state) {
    const Scenario s = synthetic_scenario(static_cast<int>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(solve_restricted_strategic(s));
}
BENCHMARK(BM_RestrictedStrategicByProsumerCount)->Arg(2)->Arg(8)->Arg(32)->Arg(128);

void BM_GapReport(benchmark::State& state) {
    const Scenario s = two_prosumer_scenario(2);
    const EquilibriumOutcome ft = solve_full_truthful(s);
    const EquilibriumOutcome fs = solve_full_strategic(s);
    const EquilibriumOutcome rt = solve_restricted_truthful(s);
    const EquilibriumOutcome rs = solve_restricted_strategic(s);
    for (auto _ : state) benchmark::DoNotOptimize(gap_identities(s, ft, fs, rt, rs));
}
BENCHMARK(BM_GapReport);

void BM_Sweep20(benchmark::State& state) {
    const Scenario s = two_prosumer_scenario(1);
    for (auto _ : state) benchmark::DoNotOptimize(run_sweep(s, 1, 20));
}
BENCHMARK(BM_Sweep20);

void BM_DispatchOracle(benchmark::State& state) {
    const Scenario s = two_prosumer_scenario(1);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            dispatch_by_bisection(s, Participation::Full, 5.0, 1e-9));
}
BENCHMARK(BM_DispatchOracle);

void BM_CournotOracle(benchmark::State& state) {
    const Scenario s = two_prosumer_scenario(2);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            cournot_best_response(s, Participation::Restricted, 1e-10, 2.0 / 3.0));
}
BENCHMARK(BM_CournotOracle);

}  // namespace

BENCHMARK_MAIN();
