#include "mtsfm/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace mtsfm {

void OptimizerConfig::validate() const
{
    if (!(initial_step > 0.0)) {
        throw ValidationError("optimizer: initial_step must be positive");
    }
    if (!(sufficient_decrease > 0.0) || !(sufficient_decrease < 1.0)) {
        throw ValidationError(
            "optimizer: sufficient_decrease must lie in (0, 1)");
    }
    if (!(momentum >= 0.0) || !(momentum < 1.0)) {
        throw ValidationError("optimizer: momentum must lie in [0, 1)");
    }
    if (!(step_shrink > 0.0) || !(step_shrink < 1.0)) {
        throw ValidationError("optimizer: step_shrink must lie in (0, 1)");
    }
    if (!(step_grow >= 1.0)) {
        throw ValidationError("optimizer: step_grow must be >= 1");
    }
    if (max_iterations < 1) {
        throw ValidationError("optimizer: max_iterations must be >= 1");
    }
    if (!(gradient_tolerance >= 0.0)) {
        throw ValidationError(
            "optimizer: gradient_tolerance must be nonnegative");
    }
    if (max_backtracks < 1) {
        throw ValidationError("optimizer: max_backtracks must be >= 1");
    }
}

RealVector descent_direction(const RealVector& gradient,
                             const RealVector& previous, double momentum)
{
    if (gradient.size() != previous.size()) {
        throw DimensionError(
            "descent_direction: gradient and previous direction differ in "
            "length");
    }
    RealVector direction = -gradient + momentum * previous;
    if (direction.dot(gradient) >= 0.0) {
        direction = -gradient;
    }
    return direction;
}

LineSearchResult armijo_backtrack(ObjectiveEvaluator& evaluator,
                                  const RealVector& point,
                                  double objective_at_point,
                                  const RealVector& gradient,
                                  const RealVector& direction,
                                  double initial_step,
                                  const OptimizerConfig& config)
{
    if (point.size() != direction.size() ||
        point.size() != gradient.size()) {
        throw DimensionError(
            "armijo_backtrack: point, gradient, and direction differ in "
            "length");
    }
    const double slope = gradient.dot(direction);

    double step = initial_step;
    LineSearchResult result;
    for (int shrink = 0; shrink <= config.max_backtracks; ++shrink) {
        const RealVector trial = point + step * direction;
        bool renderable = true;
        double trial_objective = 0.0;
        try {
            trial_objective = evaluator.value(trial);
        } catch (const NyquistError&) {
            renderable = false;
        }
        const double bound =
            objective_at_point + config.sufficient_decrease * step * slope;
        if (renderable && trial_objective <= bound) {
            result.point = trial;
            result.objective = trial_objective;
            result.step = step;
            result.backtracks = shrink;
            return result;
        }
        step *= config.step_shrink;
    }
    throw LineSearchStalled(
        "line search rejected every step after " +
        std::to_string(config.max_backtracks) + " shrinks (final step " +
        std::to_string(step / config.step_shrink) + ")");
}

RunTrace optimize(ObjectiveEvaluator& evaluator, const CoefficientVector& seed,
                  const OptimizerConfig& config,
                  const IterationCallback& callback)
{
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const BasisKind basis_kind = evaluator.waveform_config().basis;

    RealVector point = seed.stacked();
    apply_basis_mask(point, basis_kind);

    RealVector gradient;
    double objective = evaluator.evaluate(point, gradient);
    apply_basis_mask(gradient, basis_kind);
    ObjectiveEvaluator::Breakdown breakdown = evaluator.last_breakdown();

    RunTrace trace;
    trace.status = StopStatus::MaxIterations;
    RealVector previous_direction = RealVector::Zero(point.size());
    double step = config.initial_step;

    for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
        const RealVector direction =
            descent_direction(gradient, previous_direction, config.momentum);

        IterationRecord record;
        record.iteration = iteration;
        record.objective_before = objective;
        record.gisl_before = breakdown.gisl;
        record.penalty_before = breakdown.penalty;
        record.gradient_norm = gradient.norm();
        record.c1 = breakdown.c1;
        record.c2 = breakdown.c2;

        LineSearchResult accepted;
        try {
            accepted = armijo_backtrack(evaluator, point, objective, gradient,
                                        direction, step, config);
        } catch (const LineSearchStalled&) {
            trace.status = StopStatus::LineSearchStalled;
            break;
        }

        record.step = accepted.step;
        record.backtracks = accepted.backtracks;
        record.objective_after = accepted.objective;

        point = accepted.point;
        objective = accepted.objective;
        step = accepted.step * config.step_grow;

        RealVector next_gradient;
        evaluator.evaluate(point, next_gradient);
        apply_basis_mask(next_gradient, basis_kind);
        breakdown = evaluator.last_breakdown();

        const double gradient_change = (next_gradient - gradient).norm();
        gradient = next_gradient;
        previous_direction = direction;

        trace.iterations.push_back(record);
        if (callback) {
            callback(record);
        }
        if (gradient_change <= config.gradient_tolerance) {
            trace.status = StopStatus::GradientConverged;
            break;
        }
    }

    trace.final_coefficients = CoefficientVector::from_stacked(point);
    trace.final_objective = objective;
    const auto elapsed = std::chrono::steady_clock::now() - start;
    trace.wall_time_s =
        std::chrono::duration_cast<std::chrono::duration<double>>(elapsed)
            .count();
    return trace;
}

} // namespace mtsfm
