#include <benchmark/benchmark.h>

#include <random>

#include "rltqap/engine.hpp"
#include "rltqap/phases.hpp"

using namespace rltqap;

namespace {

std::vector<double> random_matrix(int m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(0.0, 100.0);
    std::vector<double> M(static_cast<std::size_t>(m) * m);
    for (auto& x : M) x = d(rng);
    return M;
}

void BM_HungarianSolve(benchmark::State& state) {
    int m = static_cast<int>(state.range(0));
    auto M = random_matrix(m, 42);
    HungarianSolver solver;
    for (auto _ : state) benchmark::DoNotOptimize(solver.solve(M, m).value);
}
BENCHMARK(BM_HungarianSolve)->Arg(4)->Arg(8)->Arg(12)->Arg(16)->Arg(32);

void BM_SpreadBtoC(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    auto inst = random_instance(n, 7);
    auto st = init_costs<double>(inst, 2, build_partition(n, 1));
    for (auto _ : state) {
        std::fill(st.b.begin(), st.b.end(), 1.0);
        spread_down(st, SpreadStep::BtoC);
    }
}
BENCHMARK(BM_SpreadBtoC)->Arg(8)->Arg(12);

void BM_ConcentrateCtoB(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    auto inst = random_instance(n, 7);
    auto base = init_costs<double>(inst, 2, build_partition(n, 1));
    HungarianSolver solver;
    for (auto _ : state) {
        state.PauseTiming();
        auto st = base;
        state.ResumeTiming();
        concentrate_up(st, ConcentrateStep::CtoB, solver);
    }
}
BENCHMARK(BM_ConcentrateCtoB)->Arg(8)->Arg(12);

void BM_MeanC(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    auto inst = random_instance(n, 7);
    auto base = init_costs<double>(inst, 2, build_partition(n, 1));
    IncomingValues none;
    for (auto _ : state) {
        auto st = base;
        mean_transfer(st, 2, none);
        benchmark::DoNotOptimize(st.c.data());
    }
}
BENCHMARK(BM_MeanC)->Arg(8)->Arg(12);

void BM_CodecRoundTrip(benchmark::State& state) {
    std::mt19937_64 rng(3);
    PhaseMessage msg;
    msg.phase = Phase::CompC;
    msg.iteration = 1;
    for (int e = 0; e < static_cast<int>(state.range(0)); ++e) {
        Tuple t{.v = {static_cast<std::uint8_t>(rng() % 12), static_cast<std::uint8_t>(rng() % 12),
                      static_cast<std::uint8_t>(rng() % 12), static_cast<std::uint8_t>(rng() % 12)},
                .arity = 2};
        msg.entries.emplace_back(t, 1.5);
    }
    for (auto _ : state) benchmark::DoNotOptimize(decode(encode(msg)).entries.size());
}
BENCHMARK(BM_CodecRoundTrip)->Arg(16)->Arg(1024);

void BM_Level2Iteration(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    auto inst = random_instance(n, 11);
    EngineConfig cfg;
    cfg.level = 2;
    cfg.max_iterations = 1;
    for (auto _ : state) {
        auto reports = run_in_process<double>(inst, cfg, 1);
        benchmark::DoNotOptimize(reports[0].final_lb);
    }
}
BENCHMARK(BM_Level2Iteration)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
