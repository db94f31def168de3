// optimizer.hpp - momentum-assisted gradient descent with a backtracking
// line search, specialized to the penalized sidelobe objective.
//
// Each iteration forms the direction q = -grad + momentum * q_prev (falling
// back to plain steepest descent whenever that combination fails to point
// downhill), then shrinks the trial step until the sufficient-decrease test
//
//   Q(phi + mu q) <= Q(phi) + c * mu * grad^T q
//
// accepts. The accepted step, grown by a small factor, seeds the next
// search. Iteration stops when the gradient stops changing (successive
// gradient difference below tolerance) or the iteration cap is reached.

#pragma once

#include "mtsfm/objective.hpp"
#include "mtsfm/types.hpp"
#include "mtsfm/waveform.hpp"

#include <functional>
#include <vector>

namespace mtsfm {

struct OptimizerConfig {
    double initial_step = 1.0;
    double sufficient_decrease = 0.1;
    double momentum = 0.1;
    double step_shrink = 0.25;
    double step_grow = 1.01;
    int max_iterations = 500;
    double gradient_tolerance = 1e-5;
    int max_backtracks = 60;

    /// Throws ValidationError on out-of-range fields.
    void validate() const;
};

enum class StopStatus {
    GradientConverged,
    MaxIterations,
    LineSearchStalled,
};

struct IterationRecord {
    int iteration = 0;
    double objective_before = 0.0;
    double gisl_before = 0.0;
    double penalty_before = 0.0;
    double gradient_norm = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double step = 0.0;
    int backtracks = 0;
    double objective_after = 0.0;
};

struct RunTrace {
    std::vector<IterationRecord> iterations;
    StopStatus status = StopStatus::MaxIterations;
    double wall_time_s = 0.0;
    CoefficientVector final_coefficients;
    double final_objective = 0.0;
};

/// -gradient + momentum * previous, replaced by -gradient whenever the
/// combined direction satisfies q^T gradient >= 0 (not a descent direction).
RealVector descent_direction(const RealVector& gradient,
                             const RealVector& previous, double momentum);

struct LineSearchResult {
    RealVector point;
    double objective = 0.0;
    double step = 0.0;
    int backtracks = 0;
};

/// Backtracking line search along direction from point. Starts at
/// initial_step and multiplies by config.step_shrink until the
/// sufficient-decrease test accepts; a trial that cannot be rendered
/// (NyquistError) counts as a rejection. Throws LineSearchStalled after
/// config.max_backtracks shrinks.
LineSearchResult armijo_backtrack(ObjectiveEvaluator& evaluator,
                                  const RealVector& point,
                                  double objective_at_point,
                                  const RealVector& gradient,
                                  const RealVector& direction,
                                  double initial_step,
                                  const OptimizerConfig& config);

using IterationCallback = std::function<void(const IterationRecord&)>;

/// Runs the descent from seed until convergence, the iteration cap, or a
/// stalled line search (the trace reports which; the best iterate reached is
/// returned in all three cases). Gradients are projected onto the
/// evaluator's basis kind, so coefficients excluded by it stay zero.
/// The callback, when set, observes each iteration record as it is made.
RunTrace optimize(ObjectiveEvaluator& evaluator, const CoefficientVector& seed,
                  const OptimizerConfig& config,
                  const IterationCallback& callback = {});

} // namespace mtsfm
