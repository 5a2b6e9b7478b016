// Timings of the main pipeline stages on a fixed germ on C.
#include <benchmark/benchmark.h>

#include <numbers>

#include "didolocus/didolocus.hpp"

using namespace didolocus;

namespace {

constexpr double pi = std::numbers::pi;

MetricModel cubic_metric() {
    Poly2 p;
    p.add(3, 0, 1);
    p.add(1, 2, -3);
    p.add(1, 0, 0.3);
    p.add(4, 0, 0.1);
    p.add(3, 1, 0.05);
    p.add(0, 4, -0.02);
    return MetricModel(BetaJet::from_poly(p));
}

void BM_Integrate(benchmark::State& state) {
    const MetricModel m = cubic_metric();
    LaunchSpec l;
    l.phi = 0.4;
    l.rho = 0.2;
    l.s_max = 2 * pi * 0.2;
    const bool sens = state.range(0) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(integrate(m, l, sens));
}
BENCHMARK(BM_Integrate)->Arg(0)->Arg(1);

void BM_FirstConjugate(benchmark::State& state) {
    const MetricModel m = cubic_metric();
    for (auto _ : state) benchmark::DoNotOptimize(first_conjugate(m, 0.4, 0.05));
}
BENCHMARK(BM_FirstConjugate);

void BM_ConjugateSection(benchmark::State& state) {
    const MetricModel m = cubic_metric();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(conjugate_section(m, pi * 0.02 * 0.02, n));
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ConjugateSection)->Arg(90)->Arg(360)->Unit(benchmark::kMillisecond);

void BM_ClassifyAsymptotic(benchmark::State& state) {
    const FSeries fs = build_fseries(cubic_metric().inv(), 1, FormulaSet::Verified);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(classify_asymptotic(fs, 1e-4, n));
}
BENCHMARK(BM_ClassifyAsymptotic)->Arg(720)->Arg(1440)->Unit(benchmark::kMillisecond);

void BM_Stratify(benchmark::State& state) {
    const Invariants inv = cubic_metric().inv();
    for (auto _ : state) benchmark::DoNotOptimize(classify(inv));
}
BENCHMARK(BM_Stratify);

}  // namespace

BENCHMARK_MAIN();
