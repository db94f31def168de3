// objective.hpp - the penalized design objective
//
//   Q(phi) = GISL(phi) + (gamma/2) * sum_k (max(c_k(phi), 0) / beta2_seed)^2
//
// where GISL is evaluated with the mainlobe/sidelobe masks frozen at the
// seed's null position, and the constraints keep the closed-form RMS
// bandwidth within a +-delta band around the seed's value:
//
//   c_1 = beta2(phi) - (1+delta) * beta2_seed
//   c_2 = (1-delta) * beta2_seed - beta2(phi)
//
// Violations enter the penalty relative to the seed bandwidth, so gamma is
// dimensionless and the GISL term and the penalty stay on comparable scales
// regardless of the absolute bandwidth of the scenario.
//
// Both the value and the analytic gradient with respect to the stacked
// coefficient vector are provided; ObjectiveEvaluator amortizes the basis,
// taper, masks, and FFT plans across repeated evaluations.

#pragma once

#include "mtsfm/correlation.hpp"
#include "mtsfm/types.hpp"
#include "mtsfm/waveform.hpp"

#include <array>
#include <functional>

namespace mtsfm {

struct ObjectiveConfig {
    double p = 2.0;
    double gamma = 2.0;
    double delta = 0.1;
    double seed_rms_bandwidth = 0.0;
    RegionSpec region;
    int frozen_null_index = 0;

    /// Throws ValidationError on out-of-range fields (p >= 2, gamma >= 0,
    /// 0 <= delta < 1, positive seed bandwidth, null index >= 1).
    void validate() const;
};

/// Anchors an ObjectiveConfig at a seed design: records its RMS bandwidth
/// and the null position of its autocorrelation, and verifies the region
/// keeps a nonempty sidelobe support. Propagates NoNullFound / EmptyRegion.
ObjectiveConfig make_objective_config(const CoefficientVector& seed,
                                      const WaveformConfig& waveform,
                                      double p, const RegionSpec& region,
                                      double gamma = 2.0, double delta = 0.1);

/// {c_1, c_2} as defined above.
std::array<double, 2> constraint_values(const CoefficientVector& coeffs,
                                        const WaveformConfig& waveform,
                                        const ObjectiveConfig& objective);

/// (gamma/2) * sum_k (max(c_k, 0) / beta2_seed)^2. Zero whenever both
/// constraints hold.
double penalty(const CoefficientVector& coeffs,
               const WaveformConfig& waveform,
               const ObjectiveConfig& objective);

/// Gradient of the penalty with respect to the stacked coefficients:
/// gamma * (max(c_1,0) - max(c_2,0)) / beta2_seed^2 * grad(beta2).
RealVector penalty_gradient(const CoefficientVector& coeffs,
                            const WaveformConfig& waveform,
                            const ObjectiveConfig& objective);

/// Central finite difference gradient of f at point. step <= 0 selects
/// 1e-6 * max(1, |point|_inf).
RealVector finite_difference_gradient(
    const std::function<double(const RealVector&)>& f,
    const RealVector& point, double step = 0.0);

/// Caches everything that does not depend on the coefficients (basis,
/// normalized taper, frozen masks, FFT plans) so each evaluation costs one
/// basis product, a handful of length-(2M-1) transforms, and one transposed
/// basis product for the gradient.
class ObjectiveEvaluator {
public:
    ObjectiveEvaluator(const WaveformConfig& waveform,
                       const ObjectiveConfig& objective);

    const WaveformConfig& waveform_config() const { return waveform_; }
    const ObjectiveConfig& objective_config() const { return objective_; }

    /// The frozen weighting pair on the centered lag axis.
    const MaskPair& masks() const { return masks_; }

    struct Breakdown {
        double objective = 0.0;
        double gisl = 0.0;
        double penalty = 0.0;
        double rms_bandwidth = 0.0;
        double c1 = 0.0;
        double c2 = 0.0;
    };

    /// Q(phi). Throws NyquistError if the rendered design is not sampleable.
    double value(const RealVector& stacked);

    /// Q(phi) split into its terms.
    Breakdown breakdown(const RealVector& stacked);

    /// Q(phi) and its full 2L analytic gradient in one pass.
    double evaluate(const RealVector& stacked, RealVector& gradient);

    /// Terms of the most recent value, breakdown, or evaluate call.
    const Breakdown& last_breakdown() const { return last_breakdown_; }

private:
    Breakdown value_core(const RealVector& stacked);

    WaveformConfig waveform_;
    ObjectiveConfig objective_;
    MaskPair masks_;

    RealMatrix basis_;
    RealVector window_;      // taper normalized to unit energy
    RealVector mainlobe_raw_;
    RealVector sidelobe_raw_;
    Fft fft_;

    // Scratch state retained between value_core and the gradient tail.
    ComplexVector padded_;
    ComplexVector transformed_;
    ComplexVector raw_acf_;
    ComplexVector weighted_;
    RealVector phase_;
    RealVector real_scratch_;
    double mainlobe_norm_ = 0.0;
    double sidelobe_norm_ = 0.0;
    double gisl_value_ = 0.0;
    Breakdown last_breakdown_;
};

/// Convenience single-shot wrappers around ObjectiveEvaluator.
double objective_value(const CoefficientVector& coeffs,
                       const WaveformConfig& waveform,
                       const ObjectiveConfig& objective);
RealVector objective_gradient(const CoefficientVector& coeffs,
                              const WaveformConfig& waveform,
                              const ObjectiveConfig& objective);
RealVector gisl_gradient(const CoefficientVector& coeffs,
                         const WaveformConfig& waveform,
                         const ObjectiveConfig& objective);

} // namespace mtsfm
