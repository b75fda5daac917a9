#include <benchmark/benchmark.h>

#include <kronred/builtin_networks.hpp>
#include <kronred/gramian.hpp>
#include <kronred/hinf.hpp>
#include <kronred/kron.hpp>
#include <kronred/simulate.hpp>
#include <kronred/sweep.hpp>

using namespace kronred;

namespace {

const OpenLinearSystem& mckeithan()
{
    static const OpenLinearSystem sys = build_open_linear(builtin::mckeithan());
    return sys;
}

void BM_KronReduce(benchmark::State& state)
{
    const auto& sys = mckeithan();
    const auto part = Partition::from_removed(21, {2, 3, 4, 16, 18});
    for (auto _ : state) {
        benchmark::DoNotOptimize(kron_reduce_linear(sys, part, OutputMode::Permissive));
    }
}
BENCHMARK(BM_KronReduce);

void BM_Gramians(benchmark::State& state)
{
    const auto& sys = mckeithan();
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_gramians(sys));
    }
}
BENCHMARK(BM_Gramians)->Unit(benchmark::kMillisecond);

void BM_HinfError(benchmark::State& state)
{
    const auto& sys = mckeithan();
    const auto red = kron_reduce_linear(sys, Partition::from_removed(21, {2, 3, 4, 16, 18}), OutputMode::Permissive);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hinf_error(sys, red));
    }
}
BENCHMARK(BM_HinfError)->Unit(benchmark::kMillisecond);

void BM_HinfErrorCached(benchmark::State& state)
{
    const auto& sys = mckeithan();
    HinfOptions o;
    o.grid_points = 400;
    const FullResponseCache cache(sys, o);
    const auto red = kron_reduce_linear(sys, Partition::from_removed(21, {2, 3, 4, 16, 18}), OutputMode::Permissive);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hinf_error(cache, red));
    }
}
BENCHMARK(BM_HinfErrorCached)->Unit(benchmark::kMicrosecond);

void BM_SweepPairs(benchmark::State& state)
{
    const auto& sys = mckeithan();
    SweepOptions o;
    o.k = 2;
    o.jobs = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sweep_subsets(sys, o));
    }
    state.counters["subsets"] = 190;
}
BENCHMARK(BM_SweepPairs)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_SimulateLinear(benchmark::State& state)
{
    const auto& sys = mckeithan();
    const double T = default_horizon(sys.A);
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_linear(sys, InputSignal::step(Vector::Ones(sys.num_inputs())), T,
                                                 Vector::Zero(sys.order())));
    }
}
BENCHMARK(BM_SimulateLinear)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
