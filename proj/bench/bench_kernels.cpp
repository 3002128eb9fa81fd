// Compares the OpenMP batch evaluator against its serial reference on the
// full-scale problem (20-node BA network, T = 10, 3420 weights).

#include <benchmark/benchmark.h>

#include "wadapt/de_core.hpp"
#include "wadapt/dynamics.hpp"
#include "wadapt/graph.hpp"
#include "wadapt/kernels.hpp"
#include "wadapt/rng.hpp"

namespace {

using namespace wadapt;

struct Problem {
    Network net = generate_ba(20, 5, 5, 1);
    EpidemicParams params = EpidemicParams::uniform(20, 0.4, 0.3, 0.153, 10);
    EvalFn eval = [this](std::span<const double> x) { return evaluate_candidate(x, net, params, 700.0); };

    std::vector<std::vector<double>> batch(int count) const
    {
        Rng rng(42);
        DEConfig cfg;
        cfg.np = count;
        std::vector<std::vector<double>> xs;
        for (auto& c : init_population(cfg, decision_dimension(20, 10), rng))
            xs.push_back(std::move(c.genes));
        return xs;
    }
};

const Problem& problem()
{
    static const Problem p;
    return p;
}

void BM_EvaluateCandidate(benchmark::State& state)
{
    const auto xs = problem().batch(4);
    for (auto _ : state)
        benchmark::DoNotOptimize(problem().eval(xs[0]));
}
BENCHMARK(BM_EvaluateCandidate)->Unit(benchmark::kMicrosecond);

void BM_BatchSerial(benchmark::State& state)
{
    const auto xs = problem().batch(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(evaluate_batch_serial(problem().eval, xs));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BatchSerial)->Arg(60)->Arg(350)->Unit(benchmark::kMillisecond);

void BM_BatchParallel(benchmark::State& state)
{
    const auto xs = problem().batch(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(evaluate_batch(problem().eval, xs));
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.counters["threads"] = worker_threads();
}
BENCHMARK(BM_BatchParallel)->Arg(60)->Arg(350)->Unit(benchmark::kMillisecond)->UseRealTime();

} // namespace

BENCHMARK_MAIN();
