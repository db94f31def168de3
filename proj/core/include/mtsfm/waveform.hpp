// waveform.hpp - parametric multi-tone sinusoidal FM (MTSFM) waveform model.
//
// The waveform's instantaneous phase is a finite Fourier series over one
// period T:
//
//   phi(t) = alpha0/2 + sum_{l=1..L} alpha_l cos(2*pi*l*t/T)
//                                  + beta_l  sin(2*pi*l*t/T)
//
// and its samples are s_n = a(t_n) exp(i phi(t_n)), normalized to unit
// energy, on the left-closed grid t_n = -T/2 + n/fs, n = 0..M-1. The 2L
// modulation indices {alpha_l, beta_l} are the design variables; everything
// else in WaveformConfig fixes how they render to samples.

#pragma once

#include "mtsfm/types.hpp"

#include <cstdint>

namespace mtsfm {

/// Fraction of the Nyquist band (fs/2) the peak instantaneous frequency may
/// occupy before synthesis refuses the design.
inline constexpr double kNyquistMarginFraction = 0.9;

enum class BasisKind {
    CosineOnly, // only alpha coefficients may be nonzero
    SineOnly,   // only beta coefficients may be nonzero
    Full,
};

enum class TaperKind { None, Tukey };

/// Amplitude taper a(t). Tukey is the tapered-cosine window; tukey_alpha in
/// [0,1] is the tapered fraction (0 = rectangular, 1 = Hann).
struct TaperSpec {
    TaperKind kind = TaperKind::None;
    double tukey_alpha = 0.0;

    void validate() const;
};

struct WaveformConfig {
    double duration_s = 1.0;      // T
    double sample_rate_hz = 0.0;  // fs
    int num_harmonics = 0;        // L
    BasisKind basis = BasisKind::Full;
    double constant_phase = 0.0;  // alpha0, rotates global phase only
    TaperSpec taper;

    /// M = round(T*fs).
    int num_samples() const;

    /// Throws ValidationError / DimensionError on out-of-range fields or
    /// M < 2L+1.
    void validate() const;
};

/// The stacked coefficient vector [alpha_1..alpha_L, beta_1..beta_L].
/// Harmonics are 1-based; accessors take the harmonic number.
class CoefficientVector {
public:
    CoefficientVector() = default;
    explicit CoefficientVector(int num_harmonics);
    CoefficientVector(const RealVector& alpha, const RealVector& beta);

    static CoefficientVector from_stacked(RealVector stacked);

    int num_harmonics() const { return num_harmonics_; }
    const RealVector& stacked() const { return stacked_; }
    RealVector& stacked() { return stacked_; }

    double alpha(int harmonic) const;
    double beta(int harmonic) const;
    void set_alpha(int harmonic, double value);
    void set_beta(int harmonic, double value);

    Eigen::VectorBlock<const RealVector> alpha_block() const;
    Eigen::VectorBlock<const RealVector> beta_block() const;

private:
    int num_harmonics_ = 0;
    RealVector stacked_; // length 2L
};

/// M x 2L matrix whose n-th row is
/// [cos(2*pi*1*t_n/T) .. cos(2*pi*L*t_n/T), sin(2*pi*1*t_n/T) .. sin(..L..)],
/// so phase = columns * stacked coefficients.
struct BasisMatrix {
    RealMatrix columns;
    int num_samples = 0;
    int num_harmonics = 0;
};

/// Unit-energy complex baseband sample vector plus the config it was
/// rendered from.
struct SampledWaveform {
    ComplexVector samples;
    WaveformConfig config;
};

/// Time grid t_n = -T/2 + n/fs, n = 0..M-1.
RealVector time_grid(const WaveformConfig& config);

/// Taper window a(t_n) per config.taper (unnormalized).
RealVector taper_window(const WaveformConfig& config);

/// Builds the cosine/sine basis matrix on the config's time grid.
/// Throws DimensionError if M < 2L+1.
BasisMatrix build_basis(const WaveformConfig& config);

/// Renders coefficients to unit-energy samples. Throws NyquistError if the
/// peak instantaneous frequency exceeds 0.9 * fs/2, DimensionError on
/// harmonic-count mismatch.
SampledWaveform synthesize_waveform(const CoefficientVector& coeffs,
                                    const WaveformConfig& config);

/// Frequency modulation function m(t_n) in Hz, evaluated analytically:
///   m(t) = sum_l (-alpha_l*l/T) sin(2*pi*l*t/T) + (beta_l*l/T) cos(2*pi*l*t/T)
RealVector instantaneous_frequency(const CoefficientVector& coeffs,
                                   const WaveformConfig& config);

/// Stacked coefficients that render the FM function through the phase basis:
/// instantaneous_frequency = basis.columns * frequency_coefficients(...).
RealVector frequency_coefficients(const CoefficientVector& coeffs,
                                  double duration_s);

/// Closed-form RMS bandwidth (second spectral moment about the centroid,
/// in squared angular frequency) of the untapered waveform:
///   (2*pi/T)^2 * sum_l l^2 (alpha_l^2 + beta_l^2) / 2
double rms_bandwidth(const CoefficientVector& coeffs,
                     const WaveformConfig& config);

/// Analytic gradient of rms_bandwidth with respect to the stacked
/// coefficients: component for alpha_l is (2*pi/T)^2 * l^2 * alpha_l, same
/// form for beta_l.
RealVector rms_bandwidth_gradient(const CoefficientVector& coeffs,
                                  const WaveformConfig& config);

/// RMS bandwidth of an ideal uniform sweep over sweep_bandwidth_hz, in the
/// same units as rms_bandwidth(): (2*pi*df)^2 / 12. Used to size seeds so
/// their effective swept band matches a requested df.
double rms_bandwidth_for_sweep(double sweep_bandwidth_hz);

/// Zeroes the coefficient block that the basis kind excludes (alpha for
/// sine-only, beta for cosine-only). No-op for the full basis.
void apply_basis_mask(RealVector& stacked, BasisKind kind);

/// Draws a pseudo-random coefficient vector (deterministic in rng_seed) and
/// rescales it so rms_bandwidth equals target exactly.
CoefficientVector generate_seed(int num_harmonics, double target_rms_bandwidth,
                                BasisKind kind, std::uint64_t rng_seed,
                                double duration_s);

} // namespace mtsfm
