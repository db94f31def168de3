#include "doctest.h"

#include "helpers.hpp"
#include "mtsfm/correlation.hpp"

#include <cmath>

using namespace mtsfm;
using test_helpers::make_config;

namespace {

CorrelationProfile profile_from_magnitudes(const RealVector& positive_lags)
{
    // Builds a symmetric profile whose positive lag arm is the given
    // magnitude sequence (index 0 = zero lag).
    const int samples = static_cast<int>(positive_lags.size());
    CorrelationProfile profile;
    profile.num_samples = samples;
    profile.lag_spacing_s = 1.0;
    profile.values = ComplexVector::Zero(2 * samples - 1);
    for (int k = 0; k < samples; ++k) {
        profile.values[samples - 1 + k] = positive_lags[k];
        profile.values[samples - 1 - k] = positive_lags[k];
    }
    return profile;
}

SampledWaveform sample_waveform(double sweep_hz, int harmonics, double fs,
                                std::uint64_t seed)
{
    const WaveformConfig config = make_config(1.0, fs, harmonics);
    const CoefficientVector coeffs =
        generate_seed(harmonics, rms_bandwidth_for_sweep(sweep_hz),
                      BasisKind::Full, seed, config.duration_s);
    return synthesize_waveform(coeffs, config);
}

} // namespace

TEST_SUITE("correlation")
{

TEST_CASE("fft autocorrelation equals the direct sum")
{
    const SampledWaveform waveform = sample_waveform(24.0, 8, 256.0, 5);
    const CorrelationProfile profile = autocorrelation(waveform);
    const ComplexVector direct =
        test_helpers::direct_autocorrelation(waveform.samples);
    REQUIRE(profile.values.size() == direct.size());
    CHECK(test_helpers::max_abs_difference(profile.values, direct) < 1e-12);
}

TEST_CASE("autocorrelation has unit peak and conjugate symmetry")
{
    const SampledWaveform waveform = sample_waveform(16.0, 4, 128.0, 9);
    const CorrelationProfile profile = autocorrelation(waveform);
    CHECK(std::abs(profile.at_lag(0) - Complex(1.0, 0.0)) < 1e-12);
    for (int k = 1; k < profile.num_samples; k += 5) {
        CHECK(std::abs(profile.at_lag(k) - std::conj(profile.at_lag(-k))) <
              1e-12);
        CHECK(std::abs(profile.at_lag(k)) <= 1.0 + 1e-12);
    }
    CHECK(profile.lag_spacing_s == doctest::Approx(1.0 / 128.0));
    CHECK(profile.lag_seconds(profile.center()) == 0.0);
}

TEST_CASE("lag centering unwraps the raw transform order")
{
    ComplexVector raw(5);
    for (int k = 0; k < 5; ++k) {
        raw[k] = Complex(k, 0.0);
    }
    const ComplexVector centered = center_lags(raw, 3);
    // Negative lags live at the tail of the raw layout.
    CHECK(centered[0].real() == 3.0);
    CHECK(centered[1].real() == 4.0);
    CHECK(centered[2].real() == 0.0);
    CHECK(centered[3].real() == 1.0);
    CHECK(centered[4].real() == 2.0);

    CHECK_THROWS_AS(center_lags(raw, 4), DimensionError);
}

TEST_CASE("workspace raw layout matches the centered profile")
{
    const SampledWaveform waveform = sample_waveform(12.0, 4, 128.0, 2);
    CorrelationWorkspace workspace(128);
    ComplexVector raw(workspace.padded_length());
    workspace.raw_autocorrelation(waveform.samples, raw);
    const CorrelationProfile profile = autocorrelation(waveform);
    CHECK(test_helpers::max_abs_difference(center_lags(raw, 128),
                                           profile.values) == 0.0);
}

TEST_CASE("mainlobe null is the first magnitude minimum")
{
    RealVector arm(40);
    arm << 1.0, 0.9, 0.7, 0.4, 0.2, 0.35, 0.3, 0.25, 0.2, 0.15, 0.1, 0.05,
        0.04, 0.03, 0.02, 0.01, 0.02, 0.03, 0.02, 0.01, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0;
    CHECK(find_mainlobe_null(profile_from_magnitudes(arm)) == 4);
}

TEST_CASE("a plateau before the upturn counts as the null")
{
    RealVector arm(20);
    arm << 1.0, 0.5, 0.5, 0.6, 0.4, 0.3, 0.2, 0.1, 0.05, 0.02, 0.01, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0;
    // k = 1 fails (not below its successor); k = 2 is the first minimum.
    CHECK(find_mainlobe_null(profile_from_magnitudes(arm)) == 2);
}

TEST_CASE("monotone magnitude has no null")
{
    RealVector arm(30);
    for (int k = 0; k < 30; ++k) {
        arm[k] = 1.0 - k / 30.0;
    }
    CHECK_THROWS_AS(find_mainlobe_null(profile_from_magnitudes(arm)),
                    NoNullFound);
}

TEST_CASE("a minimum past a quarter of the axis is degenerate")
{
    RealVector arm(41);
    for (int k = 0; k <= 15; ++k) {
        arm[k] = 1.0 - 0.05 * k;
    }
    for (int k = 16; k <= 40; ++k) {
        arm[k] = 0.25 + 0.01 * (k - 15);
    }
    // First minimum at k = 15 > 0.25 * 40.
    CHECK_THROWS_AS(find_mainlobe_null(profile_from_magnitudes(arm)),
                    NoNullFound);
}

TEST_CASE("an unmodulated tone has a featureless triangular correlation")
{
    const WaveformConfig config = make_config(1.0, 64.0, 1);
    const CoefficientVector quiet(1);
    const CorrelationProfile profile =
        autocorrelation(synthesize_waveform(quiet, config));
    CHECK_THROWS_AS(find_mainlobe_null(profile), NoNullFound);
}

TEST_CASE("mask supports partition the lag axis as specified")
{
    RegionSpec region;
    region.outer_fraction = 0.5;
    const MaskPair masks = build_masks(4, 41, region);
    const int center = 40;
    const int outer = 20;
    REQUIRE(masks.mainlobe.size() == 81);
    CHECK(masks.null_index == 4);
    CHECK(masks.outer_index == outer);
    for (int i = 0; i < 81; ++i) {
        const int lag = std::abs(i - center);
        CHECK(masks.mainlobe[i] == (lag < 4 ? 1.0 : 0.0));
        CHECK(masks.sidelobe[i] ==
              (lag >= 4 && lag <= outer ? 1.0 : 0.0));
    }
    CHECK(masks.mainlobe.sum() == doctest::Approx(7.0));
    CHECK(masks.sidelobe.sum() == doctest::Approx(2.0 * (outer - 4 + 1)));
}

TEST_CASE("a region ending before the null is empty")
{
    RegionSpec region;
    region.outer_fraction = 0.1;
    // outer = floor(0.1 * 40) = 4 < null 5.
    CHECK_THROWS_AS(build_masks(5, 41, region), EmptyRegion);
    // null exactly at the region edge keeps one lag pair.
    const MaskPair edge = build_masks(4, 41, region);
    CHECK(edge.sidelobe.sum() == doctest::Approx(2.0));

    RegionSpec bad;
    bad.outer_fraction = 1.5;
    CHECK_THROWS_AS(build_masks(4, 41, bad), ValidationError);
    CHECK_THROWS_AS(build_masks(0, 41, region), ValidationError);
}

TEST_CASE("the p = 2 ratio reduces to the classic integrated level")
{
    RealVector arm(8);
    arm << 1.0, 0.5, 0.1, 0.2, 0.1, 0.05, 0.02, 0.01;
    const CorrelationProfile profile = profile_from_magnitudes(arm);
    RegionSpec region;
    const MaskPair masks = build_masks(2, 8, region);

    // Mainlobe: lags -1, 0, 1; sidelobe: |lag| in [2, 7].
    const double mainlobe = 1.0 + 2 * 0.25;
    const double sidelobe =
        2 * (0.01 + 0.04 + 0.01 + 0.0025 + 0.0004 + 0.0001);
    CHECK(gisl(profile, masks, 2.0) ==
          doctest::Approx(sidelobe / mainlobe).epsilon(1e-12));
}

TEST_CASE("the ratio is invariant to correlation scale")
{
    const SampledWaveform waveform = sample_waveform(16.0, 6, 192.0, 7);
    CorrelationProfile profile = autocorrelation(waveform);
    RegionSpec region;
    const MaskPair masks =
        build_masks(find_mainlobe_null(profile), profile.num_samples, region);

    const double reference = gisl(profile, masks, 20.0);
    CorrelationProfile tiny = profile;
    tiny.values *= 1e-8;
    CorrelationProfile huge = profile;
    huge.values *= 1e6;
    CHECK(gisl(tiny, masks, 20.0) ==
          doctest::Approx(reference).epsilon(1e-12));
    CHECK(gisl(huge, masks, 20.0) ==
          doctest::Approx(reference).epsilon(1e-12));
}

TEST_CASE("large p pinches the ratio against the peak sidelobe bound")
{
    const SampledWaveform waveform = sample_waveform(20.0, 8, 256.0, 13);
    const CorrelationProfile profile = autocorrelation(waveform);
    RegionSpec region;
    const MaskPair masks =
        build_masks(find_mainlobe_null(profile), profile.num_samples, region);

    const double peak_ratio =
        std::pow(10.0, pslr_db(profile, masks) / 10.0);
    const double mainlobe_count = masks.mainlobe.sum();
    const double sidelobe_count = masks.sidelobe.sum();
    for (const double p : {6.0, 10.0, 20.0}) {
        const double value = gisl(profile, masks, p);
        CHECK(value >=
              peak_ratio * std::pow(mainlobe_count, -2.0 / p) * (1 - 1e-12));
        CHECK(value <=
              peak_ratio * std::pow(sidelobe_count, 2.0 / p) * (1 + 1e-12));
    }
}

TEST_CASE("peak sidelobe ratio reads the mask extrema")
{
    RealVector arm(10);
    arm << 1.0, 0.6, 0.05, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.001;
    const CorrelationProfile profile = profile_from_magnitudes(arm);
    RegionSpec region;
    const MaskPair masks = build_masks(2, 10, region);
    CHECK(pslr_db(profile, masks) ==
          doctest::Approx(20.0 * std::log10(0.2)).epsilon(1e-12));
}

TEST_CASE("spectrum sums to one and lays out frequencies symmetrically")
{
    const SampledWaveform waveform = sample_waveform(24.0, 8, 256.0, 21);
    const PowerSpectrum even = spectrum(waveform, 2);
    REQUIRE(even.freq_hz.size() == 512);
    CHECK(even.power.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(even.freq_hz[0] == doctest::Approx(-128.0));
    CHECK(even.freq_hz[256] == doctest::Approx(0.0));
    CHECK(even.freq_hz[1] - even.freq_hz[0] ==
          doctest::Approx(256.0 / 512.0));

    // Odd transform length: zero sits exactly in the middle.
    const WaveformConfig odd_config = make_config(1.0, 65.0, 2);
    const CoefficientVector quiet(2);
    const PowerSpectrum odd =
        spectrum(synthesize_waveform(quiet, odd_config), 1);
    REQUIRE(odd.freq_hz.size() == 65);
    CHECK(odd.freq_hz[32] == doctest::Approx(0.0));
    CHECK(odd.power.sum() == doctest::Approx(1.0).epsilon(1e-12));
    // All the energy of an unmodulated tone lands in the zero bin.
    CHECK(odd.power[32] == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(spectrum(waveform, 0), ValidationError);
}

TEST_CASE("zero-shift column of the delay-Doppler surface is the "
          "autocorrelation")
{
    const SampledWaveform waveform = sample_waveform(12.0, 4, 96.0, 3);
    const CorrelationProfile profile = autocorrelation(waveform);
    const AmbiguitySurface surface = ambiguity_surface(waveform, 5, 8.0);
    REQUIRE(surface.magnitude.rows() == profile.num_lags());
    REQUIRE(surface.magnitude.cols() == 5);
    CHECK(surface.doppler_hz[0] == doctest::Approx(-8.0));
    CHECK(surface.doppler_hz[2] == doctest::Approx(0.0));
    CHECK(surface.doppler_hz[4] == doctest::Approx(8.0));
    CHECK((surface.magnitude.col(2) - profile.values.cwiseAbs())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK((surface.delay_s[0]) ==
          doctest::Approx(-(96.0 - 1) / 96.0));

    const AmbiguitySurface single = ambiguity_surface(waveform, 1, 5.0);
    CHECK(single.doppler_hz[0] == 0.0);
}

}
