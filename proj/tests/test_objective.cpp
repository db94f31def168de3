#include "doctest.h"

#include "helpers.hpp"
#include "mtsfm/objective.hpp"

#include <cmath>

using namespace mtsfm;
using test_helpers::make_config;

namespace {

struct Problem {
    WaveformConfig waveform;
    CoefficientVector seed;
    ObjectiveConfig objective;
};

Problem make_problem(int harmonics, double sample_rate_hz, double sweep_hz,
                     double p, std::uint64_t rng_seed,
                     double outer_fraction = 1.0)
{
    Problem problem;
    problem.waveform = make_config(1.0, sample_rate_hz, harmonics);
    problem.seed = generate_seed(harmonics, rms_bandwidth_for_sweep(sweep_hz),
                                 BasisKind::Full, rng_seed,
                                 problem.waveform.duration_s);
    RegionSpec region;
    region.outer_fraction = outer_fraction;
    problem.objective = make_objective_config(problem.seed, problem.waveform,
                                              p, region);
    return problem;
}

} // namespace

TEST_SUITE("objective")
{

TEST_CASE("finite differences recover a quadratic gradient exactly")
{
    RealVector point(3);
    point << 0.4, -1.2, 2.0;
    RealVector linear(3);
    linear << 1.0, -2.0, 0.5;
    auto f = [&](const RealVector& x) {
        return linear.dot(x) + x.squaredNorm();
    };
    const RealVector expected = linear + 2.0 * point;
    const RealVector numeric = finite_difference_gradient(f, point);
    CHECK(test_helpers::max_relative_error(numeric, expected) < 1e-9);
}

TEST_CASE("config validation rejects out-of-range fields")
{
    ObjectiveConfig config;
    config.p = 20.0;
    config.seed_rms_bandwidth = 100.0;
    config.frozen_null_index = 5;
    CHECK_NOTHROW(config.validate());

    ObjectiveConfig bad = config;
    bad.p = 1.5;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = config;
    bad.gamma = -1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = config;
    bad.delta = 1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = config;
    bad.seed_rms_bandwidth = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = config;
    bad.frozen_null_index = 0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = config;
    bad.region.outer_fraction = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("constraints bracket the anchored bandwidth band")
{
    const WaveformConfig config = make_config(1.0, 128.0, 4);
    ObjectiveConfig objective;
    objective.p = 2.0;
    objective.delta = 0.1;
    objective.gamma = 2.0;
    objective.frozen_null_index = 3;

    CoefficientVector coeffs(4);
    coeffs.set_alpha(1, 1.0);
    const double bandwidth = rms_bandwidth(coeffs, config);
    objective.seed_rms_bandwidth = bandwidth;

    // On the anchor: both constraints sit at -delta * anchor.
    const auto centered = constraint_values(coeffs, config, objective);
    CHECK(centered[0] == doctest::Approx(-0.1 * bandwidth).epsilon(1e-12));
    CHECK(centered[1] == doctest::Approx(-0.1 * bandwidth).epsilon(1e-12));
    CHECK(penalty(coeffs, config, objective) == 0.0);
    CHECK(penalty_gradient(coeffs, config, objective).isZero(0.0));

    // 30% above the band: only the upper constraint activates. Violations
    // enter the penalty relative to the anchor bandwidth.
    objective.seed_rms_bandwidth = bandwidth / 1.3;
    const auto above = constraint_values(coeffs, config, objective);
    CHECK(above[0] > 0.0);
    CHECK(above[1] < 0.0);
    const double above_scaled = above[0] / objective.seed_rms_bandwidth;
    CHECK(penalty(coeffs, config, objective) ==
          doctest::Approx(0.5 * 2.0 * above_scaled * above_scaled)
              .epsilon(1e-12));

    // 30% below the band: only the lower constraint activates.
    objective.seed_rms_bandwidth = bandwidth / 0.7;
    const auto below = constraint_values(coeffs, config, objective);
    CHECK(below[0] < 0.0);
    CHECK(below[1] > 0.0);
    const double below_scaled = below[1] / objective.seed_rms_bandwidth;
    CHECK(penalty(coeffs, config, objective) ==
          doctest::Approx(0.5 * 2.0 * below_scaled * below_scaled)
              .epsilon(1e-12));
}

TEST_CASE("penalty gradient matches finite differences when active")
{
    const WaveformConfig config = make_config(1.0, 128.0, 4);
    const CoefficientVector coeffs = generate_seed(
        4, rms_bandwidth_for_sweep(12.0), BasisKind::Full, 17, 1.0);

    ObjectiveConfig objective;
    objective.p = 2.0;
    objective.frozen_null_index = 3;
    objective.seed_rms_bandwidth = rms_bandwidth(coeffs, config) / 1.4;

    const RealVector analytic = penalty_gradient(coeffs, config, objective);
    const RealVector numeric = finite_difference_gradient(
        [&](const RealVector& stacked) {
            return penalty(CoefficientVector::from_stacked(stacked), config,
                           objective);
        },
        coeffs.stacked());
    CHECK(test_helpers::max_relative_error(analytic, numeric) < 1e-6);
}

TEST_CASE("anchoring records the seed bandwidth and null position")
{
    const Problem problem = make_problem(8, 256.0, 24.0, 20.0, 4);
    CHECK(problem.objective.seed_rms_bandwidth ==
          doctest::Approx(rms_bandwidth_for_sweep(24.0)).epsilon(1e-12));
    const CorrelationProfile profile = autocorrelation(
        synthesize_waveform(problem.seed, problem.waveform));
    CHECK(problem.objective.frozen_null_index == find_mainlobe_null(profile));
    CHECK(problem.objective.p == 20.0);

    // A region that ends inside the mainlobe cannot be scored.
    RegionSpec tight;
    tight.outer_fraction =
        0.5 * problem.objective.frozen_null_index / 255.0;
    CHECK_THROWS_AS(make_objective_config(problem.seed, problem.waveform,
                                          20.0, tight),
                    EmptyRegion);
}

TEST_CASE("evaluator agrees with the composed public pipeline")
{
    const Problem problem = make_problem(8, 192.0, 20.0, 20.0, 6, 0.5);
    ObjectiveEvaluator evaluator(problem.waveform, problem.objective);

    // A point away from the seed so nothing is special about it.
    CoefficientVector point = problem.seed;
    point.stacked() *= 1.07;

    const CorrelationProfile profile =
        autocorrelation(synthesize_waveform(point, problem.waveform));
    const MaskPair masks =
        build_masks(problem.objective.frozen_null_index,
                    problem.waveform.num_samples(), problem.objective.region);
    const double composed =
        gisl(profile, masks, problem.objective.p) +
        penalty(point, problem.waveform, problem.objective);

    CHECK(evaluator.value(point.stacked()) ==
          doctest::Approx(composed).epsilon(1e-11));

    const auto breakdown = evaluator.breakdown(point.stacked());
    CHECK(breakdown.objective ==
          doctest::Approx(breakdown.gisl + breakdown.penalty)
              .epsilon(1e-14));
    CHECK(breakdown.rms_bandwidth ==
          doctest::Approx(rms_bandwidth(point, problem.waveform))
              .epsilon(1e-14));
    CHECK(evaluator.masks().null_index ==
          problem.objective.frozen_null_index);
}

TEST_CASE("analytic gradient matches finite differences")
{
    struct Case {
        int harmonics;
        double p;
        std::uint64_t rng_seed;
        double anchor_scale; // divides the true bandwidth to (de)activate
    };
    const Case cases[] = {
        {4, 2.0, 101, 1.0},  {4, 20.0, 102, 1.0},  {16, 2.0, 103, 1.0},
        {16, 20.0, 104, 1.0}, {4, 2.0, 105, 1.3},  {16, 20.0, 106, 1.3},
        {4, 20.0, 107, 0.7},  {16, 2.0, 108, 0.7},
    };
    for (const Case& c : cases) {
        CAPTURE(c.harmonics);
        CAPTURE(c.p);
        CAPTURE(c.rng_seed);
        CAPTURE(c.anchor_scale);

        Problem problem =
            make_problem(c.harmonics, 128.0, 12.0, c.p, c.rng_seed);
        problem.objective.seed_rms_bandwidth /= c.anchor_scale;
        ObjectiveEvaluator evaluator(problem.waveform, problem.objective);

        RealVector analytic;
        evaluator.evaluate(problem.seed.stacked(), analytic);
        const RealVector numeric = finite_difference_gradient(
            [&](const RealVector& stacked) {
                return evaluator.value(stacked);
            },
            problem.seed.stacked());
        CHECK(test_helpers::max_relative_error(analytic, numeric) < 1e-4);
    }
}

TEST_CASE("objective gradient splits into ratio and penalty parts")
{
    Problem problem = make_problem(6, 128.0, 12.0, 20.0, 31);
    problem.objective.seed_rms_bandwidth /= 1.25;

    const RealVector total =
        objective_gradient(problem.seed, problem.waveform, problem.objective);
    const RealVector ratio =
        gisl_gradient(problem.seed, problem.waveform, problem.objective);
    const RealVector band = penalty_gradient(problem.seed, problem.waveform,
                                             problem.objective);
    CHECK((total - ratio - band).cwiseAbs().maxCoeff() <
          1e-12 * total.cwiseAbs().maxCoeff());
}

TEST_CASE("evaluation is bitwise deterministic across instances")
{
    const Problem problem = make_problem(8, 256.0, 24.0, 20.0, 8);
    ObjectiveEvaluator first(problem.waveform, problem.objective);
    ObjectiveEvaluator second(problem.waveform, problem.objective);

    RealVector gradient_first;
    RealVector gradient_second;
    const double value_first =
        first.evaluate(problem.seed.stacked(), gradient_first);
    const double value_second =
        second.evaluate(problem.seed.stacked(), gradient_second);
    CHECK(value_first == value_second);
    CHECK((gradient_first - gradient_second).isZero(0.0));
}

TEST_CASE("an unsampleable trial point raises the band guard")
{
    const Problem problem = make_problem(4, 64.0, 8.0, 2.0, 12);
    ObjectiveEvaluator evaluator(problem.waveform, problem.objective);
    RealVector wild = problem.seed.stacked();
    wild[3] += 40.0;
    CHECK_THROWS_AS(evaluator.value(wild), NyquistError);
}

TEST_CASE("evaluator rejects a wrong-length coefficient vector")
{
    const Problem problem = make_problem(4, 128.0, 16.0, 2.0, 14);
    ObjectiveEvaluator evaluator(problem.waveform, problem.objective);
    CHECK_THROWS_AS(evaluator.value(RealVector::Zero(6)), DimensionError);
}

}
