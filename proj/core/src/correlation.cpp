#include "mtsfm/correlation.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <string>

namespace mtsfm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// A mainlobe null this far out (as a fraction of the positive lag axis)
// means the magnitude has no real lobe structure to separate.
constexpr double kMaxNullFraction = 0.25;

std::size_t checked_padded_length(int num_samples)
{
    if (num_samples < 1) {
        throw DimensionError("CorrelationWorkspace: need at least one sample");
    }
    return static_cast<std::size_t>(2 * num_samples - 1);
}

} // namespace

void RegionSpec::validate() const
{
    if (!(outer_fraction > 0.0) || !(outer_fraction <= 1.0)) {
        throw ValidationError("region: outer_fraction must lie in (0, 1]");
    }
}

CorrelationWorkspace::CorrelationWorkspace(int num_samples)
    : num_samples_(num_samples),
      fft_(checked_padded_length(num_samples)),
      padded_(ComplexVector::Zero(2 * num_samples - 1)),
      transformed_(2 * num_samples - 1)
{
}

void CorrelationWorkspace::raw_autocorrelation(const ComplexVector& samples,
                                               ComplexVector& out)
{
    if (samples.size() != num_samples_) {
        throw DimensionError("raw_autocorrelation: expected " +
                             std::to_string(num_samples_) + " samples, got " +
                             std::to_string(samples.size()));
    }
    padded_.head(num_samples_) = samples;
    fft_.forward(padded_, transformed_);
    transformed_ = transformed_.cwiseAbs2().cast<Complex>();
    fft_.inverse(transformed_, out);
}

ComplexVector center_lags(const ComplexVector& raw, int num_samples)
{
    const int padded = 2 * num_samples - 1;
    if (raw.size() != padded) {
        throw DimensionError("center_lags: expected length " +
                             std::to_string(padded) + ", got " +
                             std::to_string(raw.size()));
    }
    ComplexVector centered(padded);
    const int center = num_samples - 1;
    for (int i = 0; i < padded; ++i) {
        const int lag = i - center;
        centered[i] = raw[(lag + padded) % padded];
    }
    return centered;
}

CorrelationProfile autocorrelation(const SampledWaveform& waveform)
{
    const int samples = static_cast<int>(waveform.samples.size());
    CorrelationWorkspace workspace(samples);
    ComplexVector raw(workspace.padded_length());
    workspace.raw_autocorrelation(waveform.samples, raw);

    CorrelationProfile profile;
    profile.values = center_lags(raw, samples);
    profile.num_samples = samples;
    profile.lag_spacing_s = 1.0 / waveform.config.sample_rate_hz;
    return profile;
}

int find_mainlobe_null(const CorrelationProfile& profile)
{
    const int center = profile.center();
    const int max_lag = profile.num_samples - 1;
    for (int k = 1; k + 1 <= max_lag; ++k) {
        const double prev = std::abs(profile.values[center + k - 1]);
        const double here = std::abs(profile.values[center + k]);
        const double next = std::abs(profile.values[center + k + 1]);
        if (here <= prev && here < next) {
            if (k > kMaxNullFraction * max_lag) {
                throw NoNullFound(
                    "first magnitude minimum at lag " + std::to_string(k) +
                    " of " + std::to_string(max_lag) +
                    " lies beyond a quarter of the lag axis");
            }
            return k;
        }
    }
    throw NoNullFound(
        "correlation magnitude has no interior minimum on the lag axis");
}

MaskPair build_masks(int null_index, int num_samples, const RegionSpec& region)
{
    region.validate();
    const int max_lag = num_samples - 1;
    if (null_index < 1 || null_index > max_lag) {
        throw ValidationError("build_masks: null index " +
                              std::to_string(null_index) +
                              " outside [1, " + std::to_string(max_lag) + "]");
    }
    const int outer =
        static_cast<int>(std::floor(region.outer_fraction * max_lag));
    if (null_index > outer) {
        throw EmptyRegion("build_masks: no sidelobe lags between null index " +
                          std::to_string(null_index) + " and region edge " +
                          std::to_string(outer));
    }

    const int padded = 2 * num_samples - 1;
    MaskPair masks;
    masks.null_index = null_index;
    masks.outer_index = outer;
    masks.mainlobe = RealVector::Zero(padded);
    masks.sidelobe = RealVector::Zero(padded);
    const int center = num_samples - 1;
    for (int i = 0; i < padded; ++i) {
        const int lag = std::abs(i - center);
        if (lag < null_index) {
            masks.mainlobe[i] = 1.0;
        } else if (lag <= outer) {
            masks.sidelobe[i] = 1.0;
        }
    }
    return masks;
}

double gisl(const CorrelationProfile& profile, const MaskPair& masks,
            double p)
{
    if (!(p >= 1.0)) {
        throw ValidationError("gisl: p must be >= 1");
    }
    const auto length = profile.values.size();
    if (masks.mainlobe.size() != length || masks.sidelobe.size() != length) {
        throw DimensionError("gisl: mask length does not match profile");
    }

    double peak = 0.0;
    for (Eigen::Index i = 0; i < length; ++i) {
        if (masks.mainlobe[i] > 0.0 || masks.sidelobe[i] > 0.0) {
            peak = std::max(peak, std::abs(profile.values[i]));
        }
    }
    if (peak == 0.0) {
        throw ValidationError("gisl: correlation is zero on the mask support");
    }

    double mainlobe_sum = 0.0;
    double sidelobe_sum = 0.0;
    for (Eigen::Index i = 0; i < length; ++i) {
        const double scaled = std::abs(profile.values[i]) / peak;
        if (masks.mainlobe[i] > 0.0) {
            mainlobe_sum += masks.mainlobe[i] * std::pow(scaled, p);
        }
        if (masks.sidelobe[i] > 0.0) {
            sidelobe_sum += masks.sidelobe[i] * std::pow(scaled, p);
        }
    }
    mainlobe_sum = std::max(mainlobe_sum, DBL_MIN);
    return std::pow(sidelobe_sum / mainlobe_sum, 2.0 / p);
}

double pslr_db(const CorrelationProfile& profile, const MaskPair& masks)
{
    const auto length = profile.values.size();
    if (masks.mainlobe.size() != length || masks.sidelobe.size() != length) {
        throw DimensionError("pslr_db: mask length does not match profile");
    }
    double mainlobe_peak = 0.0;
    double sidelobe_peak = 0.0;
    for (Eigen::Index i = 0; i < length; ++i) {
        const double magnitude = std::abs(profile.values[i]);
        if (masks.mainlobe[i] > 0.0) {
            mainlobe_peak = std::max(mainlobe_peak, magnitude);
        }
        if (masks.sidelobe[i] > 0.0) {
            sidelobe_peak = std::max(sidelobe_peak, magnitude);
        }
    }
    if (mainlobe_peak == 0.0) {
        throw ValidationError("pslr_db: mainlobe support has zero magnitude");
    }
    return amplitude_db(sidelobe_peak / mainlobe_peak);
}

PowerSpectrum spectrum(const SampledWaveform& waveform, int pad_factor)
{
    if (pad_factor < 1) {
        throw ValidationError("spectrum: pad_factor must be >= 1");
    }
    const int samples = static_cast<int>(waveform.samples.size());
    const int padded = samples * pad_factor;
    Fft fft(static_cast<std::size_t>(padded));

    ComplexVector input = ComplexVector::Zero(padded);
    input.head(samples) = waveform.samples;
    const ComplexVector transformed = fft.forward(input);

    PowerSpectrum result;
    result.freq_hz.resize(padded);
    result.power.resize(padded);
    const double bin_hz = waveform.config.sample_rate_hz / padded;
    // fftshift: position i holds DFT bin (i + ceil(N/2)) mod N, so the
    // frequency axis ascends through zero at position floor(N/2).
    const int shift = padded / 2;
    for (int i = 0; i < padded; ++i) {
        const int bin = (i + (padded - shift)) % padded;
        result.freq_hz[i] = (i - shift) * bin_hz;
        result.power[i] = std::norm(transformed[bin]) / padded;
    }
    return result;
}

AmbiguitySurface ambiguity_surface(const SampledWaveform& waveform,
                                   int num_doppler, double max_doppler_hz)
{
    if (num_doppler < 1) {
        throw ValidationError("ambiguity_surface: num_doppler must be >= 1");
    }
    if (!(max_doppler_hz >= 0.0)) {
        throw ValidationError(
            "ambiguity_surface: max_doppler_hz must be nonnegative");
    }
    const int samples = static_cast<int>(waveform.samples.size());
    const int padded = 2 * samples - 1;
    Fft fft(static_cast<std::size_t>(padded));

    ComplexVector reference = ComplexVector::Zero(padded);
    reference.head(samples) = waveform.samples;
    const ComplexVector reference_spectrum = fft.forward(reference);

    const RealVector grid = time_grid(waveform.config);
    AmbiguitySurface surface;
    surface.doppler_hz.resize(num_doppler);
    surface.delay_s.resize(padded);
    surface.magnitude.resize(padded, num_doppler);
    const int center = samples - 1;
    const double spacing = 1.0 / waveform.config.sample_rate_hz;
    for (int i = 0; i < padded; ++i) {
        surface.delay_s[i] = (i - center) * spacing;
    }

    ComplexVector shifted = ComplexVector::Zero(padded);
    ComplexVector product(padded);
    ComplexVector raw(padded);
    for (int j = 0; j < num_doppler; ++j) {
        const double doppler =
            (num_doppler == 1)
                ? 0.0
                : -max_doppler_hz +
                      2.0 * max_doppler_hz * j / (num_doppler - 1);
        surface.doppler_hz[j] = doppler;
        for (int n = 0; n < samples; ++n) {
            shifted[n] = waveform.samples[n] *
                         std::polar(1.0, kTwoPi * doppler * grid[n]);
        }
        fft.forward(shifted, product);
        product = product.cwiseProduct(reference_spectrum.conjugate());
        fft.inverse(product, raw);
        const ComplexVector centered = center_lags(raw, samples);
        surface.magnitude.col(j) = centered.cwiseAbs();
    }
    return surface;
}

} // namespace mtsfm
