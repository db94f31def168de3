// Shared oracles and builders for the test suites. Everything here is an
// independent reference computation (direct sums, spectral moments), kept
// deliberately naive so it cannot share a bug with the library code.

#pragma once

#include "mtsfm/correlation.hpp"
#include "mtsfm/objective.hpp"
#include "mtsfm/waveform.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace test_helpers {

inline mtsfm::WaveformConfig make_config(double duration_s,
                                         double sample_rate_hz,
                                         int num_harmonics,
                                         mtsfm::BasisKind basis =
                                             mtsfm::BasisKind::Full)
{
    mtsfm::WaveformConfig config;
    config.duration_s = duration_s;
    config.sample_rate_hz = sample_rate_hz;
    config.num_harmonics = num_harmonics;
    config.basis = basis;
    return config;
}

/// O(M^2) linear autocorrelation on the centered lag axis:
/// out[i] = sum_t s[t + lag] * conj(s[t]) with lag = i - (M-1).
inline mtsfm::ComplexVector direct_autocorrelation(
    const mtsfm::ComplexVector& samples)
{
    const int m = static_cast<int>(samples.size());
    mtsfm::ComplexVector out(2 * m - 1);
    for (int i = 0; i < 2 * m - 1; ++i) {
        const int lag = i - (m - 1);
        mtsfm::Complex sum(0.0, 0.0);
        for (int t = 0; t < m; ++t) {
            const int shifted = t + lag;
            if (shifted >= 0 && shifted < m) {
                sum += samples[shifted] * std::conj(samples[t]);
            }
        }
        out[i] = sum;
    }
    return out;
}

/// Second moment of the power spectrum about its centroid, in squared
/// angular frequency. Uses the unpadded transform, whose bins are the
/// Fourier series coefficients of the one-period waveform.
inline double spectral_second_moment(const mtsfm::SampledWaveform& waveform)
{
    const mtsfm::PowerSpectrum ps = mtsfm::spectrum(waveform, 1);
    double total = 0.0;
    double first = 0.0;
    for (Eigen::Index i = 0; i < ps.power.size(); ++i) {
        const double omega = 2.0 * std::numbers::pi * ps.freq_hz[i];
        total += ps.power[i];
        first += ps.power[i] * omega;
    }
    const double centroid = first / total;
    double second = 0.0;
    for (Eigen::Index i = 0; i < ps.power.size(); ++i) {
        const double omega = 2.0 * std::numbers::pi * ps.freq_hz[i];
        const double offset = omega - centroid;
        second += ps.power[i] * offset * offset;
    }
    return second / total;
}

/// Largest relative elementwise deviation, with the denominator floored by
/// the largest magnitude in the reference vector.
inline double max_relative_error(const mtsfm::RealVector& candidate,
                                 const mtsfm::RealVector& reference)
{
    const double floor_scale =
        std::max(reference.cwiseAbs().maxCoeff(), 1e-300);
    return (candidate - reference).cwiseAbs().maxCoeff() / floor_scale;
}

inline double max_abs_difference(const mtsfm::ComplexVector& a,
                                 const mtsfm::ComplexVector& b)
{
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace test_helpers
