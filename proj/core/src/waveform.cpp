#include "mtsfm/waveform.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace mtsfm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_harmonics_match(const CoefficientVector& coeffs,
                           const WaveformConfig& config)
{
    if (coeffs.num_harmonics() != config.num_harmonics) {
        throw DimensionError("coefficient vector has " +
                             std::to_string(coeffs.num_harmonics()) +
                             " harmonics, config expects " +
                             std::to_string(config.num_harmonics));
    }
}

// Uniform double in (0, 1], fully specified by the mt19937_64 stream so the
// draw is reproducible across standard libraries.
double uniform_unit(std::mt19937_64& rng)
{
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

// Box-Muller standard normal pair from two uniform draws.
std::pair<double, double> normal_pair(std::mt19937_64& rng)
{
    const double u1 = uniform_unit(rng);
    const double u2 = uniform_unit(rng);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    return {radius * std::cos(kTwoPi * u2), radius * std::sin(kTwoPi * u2)};
}

} // namespace

void TaperSpec::validate() const
{
    if (kind == TaperKind::Tukey &&
        (!(tukey_alpha >= 0.0) || !(tukey_alpha <= 1.0))) {
        throw ValidationError("taper: tukey_alpha must lie in [0, 1]");
    }
}

int WaveformConfig::num_samples() const
{
    return static_cast<int>(std::llround(duration_s * sample_rate_hz));
}

void WaveformConfig::validate() const
{
    if (!(duration_s > 0.0)) {
        throw ValidationError("waveform: duration_s must be positive");
    }
    if (!(sample_rate_hz > 0.0)) {
        throw ValidationError("waveform: sample_rate_hz must be positive");
    }
    if (num_harmonics < 1) {
        throw ValidationError("waveform: num_harmonics must be >= 1");
    }
    taper.validate();
    const int samples = num_samples();
    if (samples < 2 * num_harmonics + 1) {
        throw DimensionError("waveform: " + std::to_string(samples) +
                             " samples cannot carry " +
                             std::to_string(num_harmonics) +
                             " harmonics (need M >= 2L+1)");
    }
}

CoefficientVector::CoefficientVector(int num_harmonics)
    : num_harmonics_(num_harmonics),
      stacked_(RealVector::Zero(2 * num_harmonics))
{
    if (num_harmonics < 1) {
        throw DimensionError("CoefficientVector: need at least one harmonic");
    }
}

CoefficientVector::CoefficientVector(const RealVector& alpha,
                                     const RealVector& beta)
{
    if (alpha.size() != beta.size() || alpha.size() == 0) {
        throw DimensionError(
            "CoefficientVector: alpha and beta must be nonempty and equal "
            "length");
    }
    num_harmonics_ = static_cast<int>(alpha.size());
    stacked_.resize(2 * num_harmonics_);
    stacked_.head(num_harmonics_) = alpha;
    stacked_.tail(num_harmonics_) = beta;
}

CoefficientVector CoefficientVector::from_stacked(RealVector stacked)
{
    if (stacked.size() == 0 || stacked.size() % 2 != 0) {
        throw DimensionError(
            "CoefficientVector: stacked length must be even and nonzero");
    }
    CoefficientVector result;
    result.num_harmonics_ = static_cast<int>(stacked.size() / 2);
    result.stacked_ = std::move(stacked);
    return result;
}

double CoefficientVector::alpha(int harmonic) const
{
    return stacked_[harmonic - 1];
}

double CoefficientVector::beta(int harmonic) const
{
    return stacked_[num_harmonics_ + harmonic - 1];
}

void CoefficientVector::set_alpha(int harmonic, double value)
{
    stacked_[harmonic - 1] = value;
}

void CoefficientVector::set_beta(int harmonic, double value)
{
    stacked_[num_harmonics_ + harmonic - 1] = value;
}

Eigen::VectorBlock<const RealVector> CoefficientVector::alpha_block() const
{
    return stacked_.head(num_harmonics_);
}

Eigen::VectorBlock<const RealVector> CoefficientVector::beta_block() const
{
    return stacked_.tail(num_harmonics_);
}

RealVector time_grid(const WaveformConfig& config)
{
    const int samples = config.num_samples();
    RealVector grid(samples);
    const double dt = 1.0 / config.sample_rate_hz;
    const double start = -0.5 * config.duration_s;
    for (int n = 0; n < samples; ++n) {
        grid[n] = start + n * dt;
    }
    return grid;
}

RealVector taper_window(const WaveformConfig& config)
{
    const int samples = config.num_samples();
    RealVector window = RealVector::Ones(samples);
    if (config.taper.kind == TaperKind::None || config.taper.tukey_alpha == 0.0) {
        return window;
    }
    const double alpha = config.taper.tukey_alpha;
    const double edge = alpha * (samples - 1) / 2.0;
    for (int n = 0; n < samples; ++n) {
        const double mirrored = std::min<double>(n, samples - 1 - n);
        if (mirrored < edge) {
            window[n] = 0.5 * (1.0 + std::cos(kPi * (mirrored / edge - 1.0)));
        }
    }
    return window;
}

BasisMatrix build_basis(const WaveformConfig& config)
{
    config.validate();
    const int samples = config.num_samples();
    const int harmonics = config.num_harmonics;
    const RealVector grid = time_grid(config);

    BasisMatrix basis;
    basis.num_samples = samples;
    basis.num_harmonics = harmonics;
    basis.columns.resize(samples, 2 * harmonics);
    for (int n = 0; n < samples; ++n) {
        const double base_angle = kTwoPi * grid[n] / config.duration_s;
        for (int l = 1; l <= harmonics; ++l) {
            const double angle = base_angle * l;
            basis.columns(n, l - 1) = std::cos(angle);
            basis.columns(n, harmonics + l - 1) = std::sin(angle);
        }
    }
    return basis;
}

SampledWaveform synthesize_waveform(const CoefficientVector& coeffs,
                                    const WaveformConfig& config)
{
    config.validate();
    check_harmonics_match(coeffs, config);

    const BasisMatrix basis = build_basis(config);
    const RealVector frequency =
        basis.columns * frequency_coefficients(coeffs, config.duration_s);
    const double peak = frequency.cwiseAbs().maxCoeff();
    const double limit = kNyquistMarginFraction * config.sample_rate_hz / 2.0;
    if (peak > limit) {
        throw NyquistError("peak instantaneous frequency " +
                           std::to_string(peak) + " Hz exceeds " +
                           std::to_string(limit) + " Hz (0.9 * fs/2)");
    }

    const RealVector phase = basis.columns * coeffs.stacked();
    const RealVector window = taper_window(config);

    const int samples = config.num_samples();
    SampledWaveform waveform;
    waveform.config = config;
    waveform.samples.resize(samples);
    const double phase0 = config.constant_phase / 2.0;
    for (int n = 0; n < samples; ++n) {
        waveform.samples[n] =
            window[n] * std::polar(1.0, phase0 + phase[n]);
    }
    waveform.samples /= waveform.samples.norm();
    return waveform;
}

RealVector instantaneous_frequency(const CoefficientVector& coeffs,
                                   const WaveformConfig& config)
{
    config.validate();
    check_harmonics_match(coeffs, config);
    const BasisMatrix basis = build_basis(config);
    return basis.columns * frequency_coefficients(coeffs, config.duration_s);
}

RealVector frequency_coefficients(const CoefficientVector& coeffs,
                                  double duration_s)
{
    // m(t) = B * [l*beta_l/T ; -l*alpha_l/T]: the phase basis applied to
    // harmonically scaled, block-swapped coefficients.
    const int harmonics = coeffs.num_harmonics();
    RealVector swapped(2 * harmonics);
    for (int l = 1; l <= harmonics; ++l) {
        const double scale = l / duration_s;
        swapped[l - 1] = scale * coeffs.beta(l);
        swapped[harmonics + l - 1] = -scale * coeffs.alpha(l);
    }
    return swapped;
}

double rms_bandwidth(const CoefficientVector& coeffs,
                     const WaveformConfig& config)
{
    check_harmonics_match(coeffs, config);
    const double scale = kTwoPi / config.duration_s;
    double sum = 0.0;
    for (int l = 1; l <= coeffs.num_harmonics(); ++l) {
        const double a = coeffs.alpha(l);
        const double b = coeffs.beta(l);
        sum += static_cast<double>(l) * l * (a * a + b * b) / 2.0;
    }
    return scale * scale * sum;
}

RealVector rms_bandwidth_gradient(const CoefficientVector& coeffs,
                                  const WaveformConfig& config)
{
    check_harmonics_match(coeffs, config);
    const int harmonics = coeffs.num_harmonics();
    const double scale = kTwoPi / config.duration_s;
    RealVector gradient(2 * harmonics);
    for (int l = 1; l <= harmonics; ++l) {
        const double factor = scale * scale * l * l;
        gradient[l - 1] = factor * coeffs.alpha(l);
        gradient[harmonics + l - 1] = factor * coeffs.beta(l);
    }
    return gradient;
}

double rms_bandwidth_for_sweep(double sweep_bandwidth_hz)
{
    const double omega = kTwoPi * sweep_bandwidth_hz;
    return omega * omega / 12.0;
}

void apply_basis_mask(RealVector& stacked, BasisKind kind)
{
    const auto harmonics = stacked.size() / 2;
    if (kind == BasisKind::SineOnly) {
        stacked.head(harmonics).setZero();
    } else if (kind == BasisKind::CosineOnly) {
        stacked.tail(harmonics).setZero();
    }
}

CoefficientVector generate_seed(int num_harmonics, double target_rms_bandwidth,
                                BasisKind kind, std::uint64_t rng_seed,
                                double duration_s)
{
    if (num_harmonics < 1) {
        throw DimensionError("generate_seed: need at least one harmonic");
    }
    if (!(target_rms_bandwidth > 0.0)) {
        throw ValidationError(
            "generate_seed: target RMS bandwidth must be positive");
    }
    if (!(duration_s > 0.0)) {
        throw ValidationError("generate_seed: duration must be positive");
    }

    std::mt19937_64 rng(rng_seed);
    RealVector stacked(2 * num_harmonics);
    for (int i = 0; i < num_harmonics; ++i) {
        const auto [a, b] = normal_pair(rng);
        stacked[i] = a;
        stacked[num_harmonics + i] = b;
    }
    apply_basis_mask(stacked, kind);

    CoefficientVector coeffs = CoefficientVector::from_stacked(stacked);
    WaveformConfig scale_config;
    scale_config.duration_s = duration_s;
    scale_config.num_harmonics = num_harmonics;
    const double current = rms_bandwidth(coeffs, scale_config);
    if (!(current > 0.0)) {
        throw Error("generate_seed: degenerate draw with zero bandwidth");
    }
    coeffs.stacked() *= std::sqrt(target_rms_bandwidth / current);
    return coeffs;
}

} // namespace mtsfm
