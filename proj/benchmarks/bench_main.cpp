#include <friedrichs/oracle.hpp>
#include <friedrichs/survival.hpp>
#include <friedrichs/timegrid.hpp>

#include <benchmark/benchmark.h>

using namespace friedrichs;

namespace {

const ModelParams kM1 = build_model(1.0, 0.1, 1.0, 5.0, 1.0);
const QuadConfig kQuad{};

void BM_SumRule(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(sum_rule(kM1, kQuad));
}
BENCHMARK(BM_SumRule)->Unit(benchmark::kMillisecond);

void BM_FindResonance(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(find_resonance(kM1, kQuad));
}
BENCHMARK(BM_FindResonance)->Unit(benchmark::kMillisecond);

void BM_SpectralTable(benchmark::State& state) {
    const double t_max = static_cast<double>(state.range(0));
    for (auto _ : state) {
        SpectralTable table(kM1, kQuad, t_max);
        benchmark::DoNotOptimize(table.size());
    }
}
BENCHMARK(BM_SpectralTable)->Arg(10)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_PoleBackgroundBuild(benchmark::State& state) {
    const auto res = find_resonance(kM1, kQuad);
    for (auto _ : state) {
        PoleBackground pb(kM1, res, kQuad);
        benchmark::DoNotOptimize(pb.ray_angle());
    }
}
BENCHMARK(BM_PoleBackgroundBuild)->Unit(benchmark::kMillisecond);

void BM_PoleBackgroundEval(benchmark::State& state) {
    const auto res = find_resonance(kM1, kQuad);
    const PoleBackground pb(kM1, res, kQuad);
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pb.amplitude(t));
        t += 0.37;
    }
}
BENCHMARK(BM_PoleBackgroundEval);

void BM_Diagonalize(benchmark::State& state) {
    const auto bath = discretize(kM1, static_cast<int>(state.range(0)), 40.0, BathScheme::Uniform);
    for (auto _ : state) benchmark::DoNotOptimize(diagonalize(bath));
}
BENCHMARK(BM_Diagonalize)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
