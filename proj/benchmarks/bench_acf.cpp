#include "mtsfm/correlation.hpp"
#include "mtsfm/waveform.hpp"

#include <benchmark/benchmark.h>

using namespace mtsfm;

namespace {

SampledWaveform make_waveform(int num_samples)
{
    WaveformConfig config;
    config.duration_s = 1.0;
    config.sample_rate_hz = num_samples;
    config.num_harmonics = 16;
    const CoefficientVector coeffs =
        generate_seed(16, rms_bandwidth_for_sweep(64.0), config.basis, 1,
                      config.duration_s);
    return synthesize_waveform(coeffs, config);
}

void BM_RawAutocorrelation(benchmark::State& state)
{
    const int num_samples = static_cast<int>(state.range(0));
    const SampledWaveform waveform = make_waveform(num_samples);
    CorrelationWorkspace workspace(num_samples);
    ComplexVector out;
    workspace.raw_autocorrelation(waveform.samples, out); // plan once
    for (auto _ : state) {
        workspace.raw_autocorrelation(waveform.samples, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetComplexityN(num_samples);
}

void BM_FullProfile(benchmark::State& state)
{
    const int num_samples = static_cast<int>(state.range(0));
    const SampledWaveform waveform = make_waveform(num_samples);
    for (auto _ : state) {
        const CorrelationProfile profile = autocorrelation(waveform);
        benchmark::DoNotOptimize(profile.values.data());
    }
    state.SetComplexityN(num_samples);
}

} // namespace

BENCHMARK(BM_RawAutocorrelation)
    ->RangeMultiplier(2)
    ->Range(1024, 16384)
    ->Complexity(benchmark::oNLogN);
BENCHMARK(BM_FullProfile)
    ->RangeMultiplier(2)
    ->Range(1024, 16384)
    ->Complexity(benchmark::oNLogN);

BENCHMARK_MAIN();
