#include "mtsfm/objective.hpp"
#include "mtsfm/waveform.hpp"

#include <benchmark/benchmark.h>

#include <memory>

using namespace mtsfm;

namespace {

struct Fixture {
    WaveformConfig config;
    CoefficientVector coeffs;
    std::unique_ptr<ObjectiveEvaluator> evaluator;

    Fixture(int num_samples, int num_harmonics)
    {
        config.duration_s = 1.0;
        config.sample_rate_hz = num_samples;
        config.num_harmonics = num_harmonics;
        coeffs = generate_seed(num_harmonics, rms_bandwidth_for_sweep(64.0),
                               config.basis, 1, config.duration_s);
        const ObjectiveConfig objective =
            make_objective_config(coeffs, config, 20.0, RegionSpec{});
        evaluator = std::make_unique<ObjectiveEvaluator>(config, objective);
    }
};

// One descent iteration is dominated by a fused value-plus-gradient
// evaluation; this measures that cost directly.
void BM_ValueAndGradient(benchmark::State& state)
{
    Fixture fixture(static_cast<int>(state.range(0)),
                    static_cast<int>(state.range(1)));
    RealVector gradient;
    fixture.evaluator->evaluate(fixture.coeffs.stacked(), gradient);
    for (auto _ : state) {
        const double value =
            fixture.evaluator->evaluate(fixture.coeffs.stacked(), gradient);
        benchmark::DoNotOptimize(value);
        benchmark::DoNotOptimize(gradient.data());
    }
    state.SetComplexityN(state.range(0));
}

void BM_ValueOnly(benchmark::State& state)
{
    Fixture fixture(static_cast<int>(state.range(0)),
                    static_cast<int>(state.range(1)));
    for (auto _ : state) {
        const double value =
            fixture.evaluator->value(fixture.coeffs.stacked());
        benchmark::DoNotOptimize(value);
    }
    state.SetComplexityN(state.range(0));
}

} // namespace

BENCHMARK(BM_ValueAndGradient)
    ->Args({4096, 16})
    ->Args({8192, 16})
    ->Args({16384, 16})
    ->Args({4096, 64})
    ->Args({4096, 256})
    ->Complexity(benchmark::oNLogN);
BENCHMARK(BM_ValueOnly)
    ->Args({4096, 16})
    ->Args({8192, 16})
    ->Args({16384, 16})
    ->Complexity(benchmark::oNLogN);

BENCHMARK_MAIN();
