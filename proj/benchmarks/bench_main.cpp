#include <benchmark/benchmark.h>

#include "ionchain/chain_model.hpp"
#include "ionchain/ground_state.hpp"
#include "ionchain/maps.hpp"
#include "ionchain/phonons.hpp"

using namespace ionchain;

namespace {

std::vector<double> uniform_chain(int n) {
    const ChainParams p = ChainParams::periodic(n, 0.014, 0.1);
    return initial_guess(p, golden_mean);
}

void BM_Energy(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ChainParams p = ChainParams::periodic(n, 0.014, 0.1);
    const auto x = uniform_chain(n);
    for (auto _ : state)
        benchmark::DoNotOptimize(energy(p, x));
}
BENCHMARK(BM_Energy)->Arg(50)->Arg(150)->Arg(300);

void BM_Gradient(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ChainParams p = ChainParams::periodic(n, 0.014, 0.1);
    const auto x = uniform_chain(n);
    for (auto _ : state)
        benchmark::DoNotOptimize(gradient(p, x));
}
BENCHMARK(BM_Gradient)->Arg(50)->Arg(150)->Arg(300);

void BM_Hessian(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ChainParams p = ChainParams::periodic(n, 0.014, 0.1);
    const auto x = uniform_chain(n);
    for (auto _ : state)
        benchmark::DoNotOptimize(hessian(p, x));
}
BENCHMARK(BM_Hessian)->Arg(50)->Arg(150)->Arg(300);

void BM_Relax(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ChainParams p = ChainParams::periodic(n, 0.014, 0.1);
    const auto start = uniform_chain(n);
    for (auto _ : state)
        benchmark::DoNotOptimize(relax(p, start, RelaxSettings{}));
}
BENCHMARK(BM_Relax)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ChainParams p = ChainParams::periodic(n, 0.014, 0.1);
    const auto config = relax(p, uniform_chain(n), RelaxSettings{});
    for (auto _ : state)
        benchmark::DoNotOptimize(spectrum(p, config));
}
BENCHMARK(BM_Spectrum)->Arg(50)->Arg(150)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_StandardMapOrbit(benchmark::State& state) {
    for (auto _ : state) {
        StandardMapState s{0.1, 0.05};
        for (int i = 0; i < 100000; ++i)
            s = standard_map_step(s, 0.97);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_StandardMapOrbit);

} // namespace

BENCHMARK_MAIN();
