// correlation.hpp - autocorrelation machinery, sidelobe metrics, and the
// reporting transforms built on top of it (power spectrum, delay-Doppler
// surface).
//
// All lag-domain quantities use the unit-energy waveform, so the zero-lag
// value is exactly 1 and magnitudes are directly comparable across designs.

#pragma once

#include "mtsfm/fft.hpp"
#include "mtsfm/types.hpp"
#include "mtsfm/waveform.hpp"

#include <cmath>

namespace mtsfm {

/// Power ratio in decibels.
inline double power_db(double ratio) { return 10.0 * std::log10(ratio); }

/// Amplitude ratio in decibels.
inline double amplitude_db(double ratio) { return 20.0 * std::log10(ratio); }

/// Autocorrelation on the centered lag axis: values[i] is the correlation at
/// lag (i - (M-1)) samples, i = 0 .. 2M-2, where M = num_samples.
struct CorrelationProfile {
    ComplexVector values;
    double lag_spacing_s = 0.0;
    int num_samples = 0;

    /// Index of the zero-lag element.
    int center() const { return num_samples - 1; }

    int num_lags() const { return static_cast<int>(values.size()); }

    double lag_seconds(int index) const
    {
        return (index - center()) * lag_spacing_s;
    }

    /// Value at a signed sample lag.
    Complex at_lag(int lag) const { return values[center() + lag]; }
};

/// Sidelobe region extent: lags with |k| <= floor(outer_fraction * (M-1))
/// participate in the metrics, the rest are ignored.
struct RegionSpec {
    double outer_fraction = 1.0;

    /// Throws ValidationError unless 0 < outer_fraction <= 1.
    void validate() const;
};

/// Binary weighting vectors on the centered lag axis. The mainlobe covers
/// |k| < null_index, the sidelobe region null_index <= |k| <= outer_index.
struct MaskPair {
    RealVector mainlobe;
    RealVector sidelobe;
    int null_index = 0;
    int outer_index = 0;
};

/// Shared FFT plans and scratch buffers for repeated correlations of
/// same-length waveforms. Transform length is 2M-1 so the circular
/// correlation of the zero-padded input equals the linear one.
class CorrelationWorkspace {
public:
    explicit CorrelationWorkspace(int num_samples);

    int num_samples() const { return num_samples_; }
    int padded_length() const { return 2 * num_samples_ - 1; }

    /// Circular autocorrelation in raw DFT order: out[k] is the lag +k value
    /// for k = 0 .. M-1, and out[N-k] the lag -k value. out has length N.
    /// Throws DimensionError if samples has the wrong length.
    void raw_autocorrelation(const ComplexVector& samples, ComplexVector& out);

    /// The length-N plans, reusable for other same-length transforms.
    Fft& fft() { return fft_; }

private:
    int num_samples_;
    Fft fft_;
    ComplexVector padded_;
    ComplexVector transformed_;
};

/// Reorders a raw-layout correlation (zero lag first, negative lags wrapped
/// to the tail) onto the centered lag axis.
ComplexVector center_lags(const ComplexVector& raw, int num_samples);

/// Full linear autocorrelation of the waveform via zero-padded FFT.
CorrelationProfile autocorrelation(const SampledWaveform& waveform);

/// First magnitude minimum outside the mainlobe peak: the smallest k >= 1
/// with |r[k]| <= |r[k-1]| and |r[k]| < |r[k+1]| on the positive lag axis.
/// Throws NoNullFound if the magnitude never turns back up, or if the first
/// minimum sits beyond a quarter of the lag axis (the peak is degenerate).
int find_mainlobe_null(const CorrelationProfile& profile);

/// Builds the mainlobe/sidelobe weighting pair for a waveform of
/// num_samples samples whose first null is null_index samples from center.
/// Throws EmptyRegion if the region keeps no lag at or beyond the null.
MaskPair build_masks(int null_index, int num_samples, const RegionSpec& region);

/// Generalized integrated sidelobe level: with J_w = sum_i w[i] |r[i]|^p,
/// returns (J_sidelobe / J_mainlobe)^(2/p). Computed with the peak magnitude
/// factored out, so the value is invariant to scaling of the correlation.
/// p = 2 gives the classic ISL ratio.
double gisl(const CorrelationProfile& profile, const MaskPair& masks,
            double p);

/// Peak sidelobe level ratio in dB: the largest magnitude on the sidelobe
/// support over the largest on the mainlobe support, as 20*log10.
double pslr_db(const CorrelationProfile& profile, const MaskPair& masks);

/// Power spectrum on an fftshifted frequency axis, normalized so the powers
/// sum to 1 for a unit-energy input.
struct PowerSpectrum {
    RealVector freq_hz;
    RealVector power;
};

/// Zero-pads to pad_factor * M samples before transforming; pad_factor >= 1.
PowerSpectrum spectrum(const SampledWaveform& waveform, int pad_factor = 8);

/// Delay-Doppler magnitude surface: magnitude(i, j) is the cross-correlation
/// magnitude at centered delay index i between the waveform and its copy
/// shifted by doppler_hz[j].
struct AmbiguitySurface {
    RealMatrix magnitude;
    RealVector delay_s;
    RealVector doppler_hz;
};

/// Doppler axis is num_doppler points spanning [-max_doppler_hz,
/// +max_doppler_hz] (just {0} when num_doppler is 1). The zero-Doppler
/// column reproduces the autocorrelation magnitude.
AmbiguitySurface ambiguity_surface(const SampledWaveform& waveform,
                                   int num_doppler, double max_doppler_hz);

} // namespace mtsfm
