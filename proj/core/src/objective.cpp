#include "mtsfm/objective.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <string>

namespace mtsfm {

namespace {

// The sidelobe-ratio gradient carries a common positive leading factor of
// four times the ratio value itself. Flip this to scale by the full
// penalized objective instead; descent directions are unaffected in the
// feasible region, and the finite-difference oracle in the test suite pins
// the false setting as the exact gradient.
constexpr bool kScaleGradientByFullObjective = false;

// Symmetric centered mask rearranged to the raw DFT lag order (zero lag
// first, the other lag arm wrapped to the tail).
RealVector mask_to_raw(const RealVector& centered, int num_samples)
{
    const int padded = 2 * num_samples - 1;
    RealVector raw(padded);
    for (int k = 0; k < padded; ++k) {
        const int lag = std::min(k, padded - k);
        raw[k] = centered[num_samples - 1 + lag];
    }
    return raw;
}

MaskPair checked_masks(const WaveformConfig& waveform,
                       const ObjectiveConfig& objective)
{
    waveform.validate();
    objective.validate();
    return build_masks(objective.frozen_null_index, waveform.num_samples(),
                       objective.region);
}

} // namespace

void ObjectiveConfig::validate() const
{
    if (!(p >= 2.0)) {
        throw ValidationError("objective: p must be >= 2");
    }
    if (!(gamma >= 0.0)) {
        throw ValidationError("objective: gamma must be nonnegative");
    }
    if (!(delta >= 0.0) || !(delta < 1.0)) {
        throw ValidationError("objective: delta must lie in [0, 1)");
    }
    if (!(seed_rms_bandwidth > 0.0)) {
        throw ValidationError(
            "objective: seed_rms_bandwidth must be positive");
    }
    if (frozen_null_index < 1) {
        throw ValidationError("objective: frozen_null_index must be >= 1");
    }
    region.validate();
}

ObjectiveConfig make_objective_config(const CoefficientVector& seed,
                                      const WaveformConfig& waveform,
                                      double p, const RegionSpec& region,
                                      double gamma, double delta)
{
    ObjectiveConfig config;
    config.p = p;
    config.gamma = gamma;
    config.delta = delta;
    config.region = region;
    config.seed_rms_bandwidth = rms_bandwidth(seed, waveform);

    const CorrelationProfile profile =
        autocorrelation(synthesize_waveform(seed, waveform));
    config.frozen_null_index = find_mainlobe_null(profile);
    config.validate();
    build_masks(config.frozen_null_index, waveform.num_samples(), region);
    return config;
}

std::array<double, 2> constraint_values(const CoefficientVector& coeffs,
                                        const WaveformConfig& waveform,
                                        const ObjectiveConfig& objective)
{
    const double bandwidth = rms_bandwidth(coeffs, waveform);
    const double anchor = objective.seed_rms_bandwidth;
    return {bandwidth - (1.0 + objective.delta) * anchor,
            (1.0 - objective.delta) * anchor - bandwidth};
}

double penalty(const CoefficientVector& coeffs,
               const WaveformConfig& waveform,
               const ObjectiveConfig& objective)
{
    const auto constraints = constraint_values(coeffs, waveform, objective);
    const double anchor = objective.seed_rms_bandwidth;
    const double upper = std::max(constraints[0], 0.0) / anchor;
    const double lower = std::max(constraints[1], 0.0) / anchor;
    return 0.5 * objective.gamma * (upper * upper + lower * lower);
}

RealVector penalty_gradient(const CoefficientVector& coeffs,
                            const WaveformConfig& waveform,
                            const ObjectiveConfig& objective)
{
    const auto constraints = constraint_values(coeffs, waveform, objective);
    const double anchor = objective.seed_rms_bandwidth;
    const double active =
        (std::max(constraints[0], 0.0) - std::max(constraints[1], 0.0)) /
        (anchor * anchor);
    return objective.gamma * active *
           rms_bandwidth_gradient(coeffs, waveform);
}

RealVector finite_difference_gradient(
    const std::function<double(const RealVector&)>& f,
    const RealVector& point, double step)
{
    double h = step;
    if (!(h > 0.0)) {
        const double scale =
            (point.size() > 0) ? point.cwiseAbs().maxCoeff() : 0.0;
        h = 1e-6 * std::max(1.0, scale);
    }
    RealVector gradient(point.size());
    RealVector probe = point;
    for (Eigen::Index i = 0; i < point.size(); ++i) {
        const double original = probe[i];
        probe[i] = original + h;
        const double forward = f(probe);
        probe[i] = original - h;
        const double backward = f(probe);
        probe[i] = original;
        gradient[i] = (forward - backward) / (2.0 * h);
    }
    return gradient;
}

ObjectiveEvaluator::ObjectiveEvaluator(const WaveformConfig& waveform,
                                       const ObjectiveConfig& objective)
    : waveform_(waveform),
      objective_(objective),
      masks_(checked_masks(waveform, objective)),
      fft_(static_cast<std::size_t>(2 * waveform.num_samples() - 1))
{
    const int samples = waveform_.num_samples();
    const int padded = 2 * samples - 1;
    basis_ = build_basis(waveform_).columns;
    window_ = taper_window(waveform_);
    window_ /= window_.norm();
    mainlobe_raw_ = mask_to_raw(masks_.mainlobe, samples);
    sidelobe_raw_ = mask_to_raw(masks_.sidelobe, samples);
    padded_ = ComplexVector::Zero(padded);
    transformed_.resize(padded);
    raw_acf_.resize(padded);
    weighted_.resize(padded);
    phase_.resize(samples);
    real_scratch_.resize(samples);
}

ObjectiveEvaluator::Breakdown
ObjectiveEvaluator::value_core(const RealVector& stacked)
{
    const int samples = waveform_.num_samples();
    const int padded = 2 * samples - 1;
    const int harmonics = waveform_.num_harmonics;
    if (stacked.size() != 2 * harmonics) {
        throw DimensionError("objective: expected " +
                             std::to_string(2 * harmonics) +
                             " coefficients, got " +
                             std::to_string(stacked.size()));
    }
    const CoefficientVector coeffs = CoefficientVector::from_stacked(stacked);

    real_scratch_.noalias() =
        basis_ * frequency_coefficients(coeffs, waveform_.duration_s);
    const double peak = real_scratch_.cwiseAbs().maxCoeff();
    const double limit =
        kNyquistMarginFraction * waveform_.sample_rate_hz / 2.0;
    if (peak > limit) {
        throw NyquistError("objective: peak instantaneous frequency " +
                           std::to_string(peak) + " Hz exceeds " +
                           std::to_string(limit) + " Hz");
    }

    phase_.noalias() = basis_ * stacked;
    const double phase0 = waveform_.constant_phase / 2.0;
    for (int n = 0; n < samples; ++n) {
        padded_[n] = window_[n] * std::polar(1.0, phase0 + phase_[n]);
    }

    fft_.forward(padded_, transformed_);
    weighted_ = transformed_.cwiseAbs2().cast<Complex>();
    fft_.inverse(weighted_, raw_acf_);

    const double p = objective_.p;
    double mainlobe_sum = 0.0;
    double sidelobe_sum = 0.0;
    for (int k = 0; k < padded; ++k) {
        const double magnitude = std::abs(raw_acf_[k]);
        if (mainlobe_raw_[k] > 0.0) {
            mainlobe_sum += mainlobe_raw_[k] * std::pow(magnitude, p);
        }
        if (sidelobe_raw_[k] > 0.0) {
            sidelobe_sum += sidelobe_raw_[k] * std::pow(magnitude, p);
        }
    }
    mainlobe_norm_ = std::max(mainlobe_sum, DBL_MIN);
    sidelobe_norm_ = std::max(sidelobe_sum, DBL_MIN);
    gisl_value_ = std::pow(sidelobe_norm_ / mainlobe_norm_, 2.0 / p);

    Breakdown result;
    result.gisl = gisl_value_;
    result.rms_bandwidth = rms_bandwidth(coeffs, waveform_);
    const double anchor = objective_.seed_rms_bandwidth;
    result.c1 = result.rms_bandwidth - (1.0 + objective_.delta) * anchor;
    result.c2 = (1.0 - objective_.delta) * anchor - result.rms_bandwidth;
    const double upper = std::max(result.c1, 0.0) / anchor;
    const double lower = std::max(result.c2, 0.0) / anchor;
    result.penalty = 0.5 * objective_.gamma * (upper * upper + lower * lower);
    result.objective = result.gisl + result.penalty;
    last_breakdown_ = result;
    return result;
}

double ObjectiveEvaluator::value(const RealVector& stacked)
{
    return value_core(stacked).objective;
}

ObjectiveEvaluator::Breakdown
ObjectiveEvaluator::breakdown(const RealVector& stacked)
{
    return value_core(stacked);
}

double ObjectiveEvaluator::evaluate(const RealVector& stacked,
                                    RealVector& gradient)
{
    const Breakdown core = value_core(stacked);
    const int samples = waveform_.num_samples();
    const int padded = 2 * samples - 1;
    const double p = objective_.p;

    // Lag-weighted correlation g[k] = |r|^(p-2) r (w_sl/J_sl - w_ml/J_ml).
    for (int k = 0; k < padded; ++k) {
        const double weight = sidelobe_raw_[k] / sidelobe_norm_ -
                              mainlobe_raw_[k] / mainlobe_norm_;
        if (weight == 0.0) {
            weighted_[k] = Complex(0.0, 0.0);
            continue;
        }
        const double magnitude = std::abs(raw_acf_[k]);
        const double shaping =
            (p == 2.0) ? 1.0 : std::pow(magnitude, p - 2.0);
        weighted_[k] = raw_acf_[k] * (weight * shaping);
    }

    // Spectral filter P = Re{fwd(g)} applied to the padded waveform, back to
    // the sample domain: u = inv(fwd(s) .* P).
    fft_.forward(weighted_, raw_acf_);
    for (int k = 0; k < padded; ++k) {
        weighted_[k] = transformed_[k] * raw_acf_[k].real();
    }
    fft_.inverse(weighted_, raw_acf_);

    for (int n = 0; n < samples; ++n) {
        real_scratch_[n] = std::imag(std::conj(padded_[n]) * raw_acf_[n]);
    }
    const double lead =
        4.0 * (kScaleGradientByFullObjective ? core.objective : core.gisl);
    gradient.resize(basis_.cols());
    gradient.noalias() = lead * (basis_.transpose() * real_scratch_);

    const double anchor = objective_.seed_rms_bandwidth;
    const double active =
        (std::max(core.c1, 0.0) - std::max(core.c2, 0.0)) / (anchor * anchor);
    if (active != 0.0 && objective_.gamma != 0.0) {
        const CoefficientVector coeffs =
            CoefficientVector::from_stacked(stacked);
        gradient += objective_.gamma * active *
                    rms_bandwidth_gradient(coeffs, waveform_);
    }
    return core.objective;
}

double objective_value(const CoefficientVector& coeffs,
                       const WaveformConfig& waveform,
                       const ObjectiveConfig& objective)
{
    ObjectiveEvaluator evaluator(waveform, objective);
    return evaluator.value(coeffs.stacked());
}

RealVector objective_gradient(const CoefficientVector& coeffs,
                              const WaveformConfig& waveform,
                              const ObjectiveConfig& objective)
{
    ObjectiveEvaluator evaluator(waveform, objective);
    RealVector gradient;
    evaluator.evaluate(coeffs.stacked(), gradient);
    return gradient;
}

RealVector gisl_gradient(const CoefficientVector& coeffs,
                         const WaveformConfig& waveform,
                         const ObjectiveConfig& objective)
{
    ObjectiveConfig ratio_only = objective;
    ratio_only.gamma = 0.0;
    ObjectiveEvaluator evaluator(waveform, ratio_only);
    RealVector gradient;
    evaluator.evaluate(coeffs.stacked(), gradient);
    return gradient;
}

} // namespace mtsfm
