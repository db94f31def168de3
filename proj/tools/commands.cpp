#include "commands.hpp"

#include "json_schema.hpp"
#include "mtsfm/io.hpp"
#include "mtsfm/objective.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

namespace mtsfm::tools {

namespace {

namespace fs = std::filesystem;

constexpr double kGradcheckTolerance = 1e-4;
constexpr int kGradcheckMaxHarmonics = 32;
constexpr int kGradcheckTrials = 3;

// Zoom window half-width in null lags: the mainlobe spans two null lags, so
// twenty of them cover ten mainlobe widths on each side of the origin.
constexpr int kZoomNullMultiples = 20;

std::string status_name(StopStatus status)
{
    switch (status) {
    case StopStatus::GradientConverged:
        return "gradient_converged";
    case StopStatus::MaxIterations:
        return "max_iterations";
    case StopStatus::LineSearchStalled:
        return "line_search_stalled";
    }
    return "unknown";
}

fs::path prepare_output_directory(const OutputSpec& outputs)
{
    const fs::path dir(outputs.directory);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }
    return dir;
}

void write_json_file(const fs::path& path, const ordered_json& root)
{
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << root.dump(2) << '\n';
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

double doppler_limit(const OutputSpec& outputs, const WaveformConfig& config)
{
    return outputs.max_doppler_hz > 0.0 ? outputs.max_doppler_hz
                                        : 8.0 / config.duration_s;
}

CoefficientVector seed_coefficients(const ScenarioConfig& config)
{
    const WaveformConfig& waveform = config.waveform;
    switch (config.seed.kind) {
    case SeedKind::SweepBandwidth:
        return generate_seed(
            waveform.num_harmonics,
            rms_bandwidth_for_sweep(config.seed.sweep_bandwidth_hz),
            waveform.basis, config.seed.rng_seed, waveform.duration_s);
    case SeedKind::BandwidthTarget:
        return generate_seed(waveform.num_harmonics,
                             config.seed.mean_square_bandwidth, waveform.basis,
                             config.seed.rng_seed, waveform.duration_s);
    case SeedKind::CoefficientFile: {
        const CoefficientFile file =
            load_coefficients(config.seed.coefficient_file);
        if (file.config.duration_s != waveform.duration_s ||
            file.config.sample_rate_hz != waveform.sample_rate_hz ||
            file.config.num_harmonics != waveform.num_harmonics) {
            throw ValidationError(
                config.seed.coefficient_file +
                ": waveform geometry disagrees with the scenario");
        }
        RealVector stacked = file.coefficients.stacked();
        apply_basis_mask(stacked, waveform.basis);
        return CoefficientVector::from_stacked(stacked);
    }
    }
    throw ValidationError("unrepresentable seed kind");
}

struct Analysis {
    MaskPair masks;
    int null_index = 0;
    double pslr = 0.0;
    double isl_db = 0.0;
    double gisl_value = 0.0;
    double gisl_db = 0.0;
    double bandwidth = 0.0;
    double null_lag_s = 0.0;
    double mainlobe_width_s = 0.0;
};

Analysis analyze(const CorrelationProfile& profile,
                 const CoefficientVector& coeffs,
                 const WaveformConfig& config, double p,
                 const RegionSpec& region)
{
    Analysis a;
    a.null_index = find_mainlobe_null(profile);
    a.masks = build_masks(a.null_index, config.num_samples(), region);
    a.pslr = pslr_db(profile, a.masks);
    a.gisl_value = gisl(profile, a.masks, p);
    a.gisl_db = power_db(a.gisl_value);
    a.isl_db = power_db(gisl(profile, a.masks, 2.0));
    a.bandwidth = rms_bandwidth(coeffs, config);
    a.null_lag_s = a.null_index * profile.lag_spacing_s;
    a.mainlobe_width_s = 2.0 * a.null_lag_s;
    return a;
}

ordered_json metrics_json(const Analysis& a, double p)
{
    return ordered_json{
        {"pslr_db", a.pslr},
        {"isl_db", a.isl_db},
        {"p", p},
        {"gisl", a.gisl_value},
        {"gisl_db", a.gisl_db},
        {"mean_square_bandwidth", a.bandwidth},
        {"null_index", a.null_index},
        {"null_lag_s", a.null_lag_s},
        {"mainlobe_width_s", a.mainlobe_width_s},
    };
}

void print_metrics(const char* label, const Analysis& a, double p)
{
    std::printf("%-10s PSLR %9.3f dB   ISL %9.3f dB   GISL(p=%g) %9.3f dB   "
                "beta2 %.6e   null %d\n",
                label, a.pslr, a.isl_db, p, a.gisl_db, a.bandwidth,
                a.null_index);
}

CorrelationProfile zoom_window(const CorrelationProfile& profile,
                               int null_index)
{
    const int half =
        std::min(kZoomNullMultiples * null_index, profile.center());
    CorrelationProfile zoomed;
    zoomed.lag_spacing_s = profile.lag_spacing_s;
    zoomed.num_samples = half + 1;
    zoomed.values =
        profile.values.segment(profile.center() - half, 2 * half + 1);
    return zoomed;
}

void emit_products(const fs::path& dir, const std::string& prefix,
                   const SampledWaveform& waveform,
                   const CorrelationProfile& profile, const OutputSpec& outputs)
{
    if (outputs.acf) {
        write_correlation_csv((dir / (prefix + "_acf.csv")).string(), profile);
    }
    if (outputs.spectrum) {
        write_spectrum_csv((dir / (prefix + "_spectrum.csv")).string(),
                           spectrum(waveform));
    }
    if (outputs.ambiguity) {
        write_ambiguity_csv(
            (dir / (prefix + "_ambiguity.csv")).string(),
            ambiguity_surface(waveform, outputs.num_doppler,
                              doppler_limit(outputs, waveform.config)));
    }
}

} // namespace

void apply_overrides(ScenarioConfig& config, const Overrides& overrides)
{
    if (overrides.out_dir) {
        config.outputs.directory = *overrides.out_dir;
    }
    if (overrides.rng_seed) {
        config.seed.rng_seed = *overrides.rng_seed;
    }
    if (overrides.p) {
        config.p = *overrides.p;
    }
    if (overrides.outer_fraction) {
        config.region.outer_fraction = *overrides.outer_fraction;
    }
}

int cmd_synth(const ScenarioConfig& config, bool quiet)
{
    const CoefficientVector coeffs = seed_coefficients(config);
    const SampledWaveform waveform =
        synthesize_waveform(coeffs, config.waveform);
    const fs::path dir = prepare_output_directory(config.outputs);
    save_coefficients((dir / "seed.json").string(), coeffs, config.waveform);
    const CorrelationProfile profile = autocorrelation(waveform);
    emit_products(dir, "seed", waveform, profile, config.outputs);

    ordered_json summary;
    summary["schema_version"] = 1;
    summary["command"] = "synth";
    try {
        const Analysis a =
            analyze(profile, coeffs, config.waveform, config.p, config.region);
        summary["status"] = "ok";
        summary["seed"] = metrics_json(a, config.p);
        write_json_file(dir / "summary.json", summary);
        if (!quiet) {
            print_metrics("seed", a, config.p);
        }
        return kExitOk;
    } catch (const Error& error) {
        const int code = exit_code_for_current_exception();
        if (code != kExitDegenerate) {
            throw;
        }
        summary["status"] = "degenerate_autocorrelation";
        summary["error"] = error.what();
        write_json_file(dir / "summary.json", summary);
        std::fprintf(stderr, "error: %s\n", error.what());
        return code;
    }
}

int cmd_optimize(const ScenarioConfig& config, bool quiet)
{
    const CoefficientVector seed = seed_coefficients(config);
    const ObjectiveConfig objective =
        make_objective_config(seed, config.waveform, config.p, config.region,
                              config.gamma, config.delta);
    ObjectiveEvaluator evaluator(config.waveform, objective);

    IterationCallback callback;
    if (!quiet) {
        callback = [](const IterationRecord& record) {
            std::printf("  iter %4d   objective %.6e   |grad| %.3e   "
                        "step %.3e   backtracks %d\n",
                        record.iteration, record.objective_after,
                        record.gradient_norm, record.step, record.backtracks);
        };
    }
    const RunTrace trace = optimize(evaluator, seed, config.optimizer, callback);

    const SampledWaveform seed_waveform =
        synthesize_waveform(seed, config.waveform);
    const SampledWaveform best_waveform =
        synthesize_waveform(trace.final_coefficients, config.waveform);

    const fs::path dir = prepare_output_directory(config.outputs);
    save_coefficients((dir / "seed.json").string(), seed, config.waveform);
    save_coefficients((dir / "optimized.json").string(),
                      trace.final_coefficients, config.waveform);
    if (config.outputs.trace) {
        write_trace_csv((dir / "trace.csv").string(), trace);
    }

    const CorrelationProfile seed_profile = autocorrelation(seed_waveform);
    const CorrelationProfile best_profile = autocorrelation(best_waveform);
    emit_products(dir, "seed", seed_waveform, seed_profile, config.outputs);
    emit_products(dir, "optimized", best_waveform, best_profile,
                  config.outputs);

    ordered_json summary;
    summary["schema_version"] = 1;
    summary["command"] = "optimize";
    summary["status"] = status_name(trace.status);
    summary["iterations"] = static_cast<int>(trace.iterations.size());
    summary["wall_time_s"] = trace.wall_time_s;
    summary["final_objective"] = trace.final_objective;
    summary["outer_fraction"] = config.region.outer_fraction;

    const Analysis seed_analysis =
        analyze(seed_profile, seed, config.waveform, config.p, config.region);
    if (config.outputs.acf) {
        write_correlation_csv(
            (dir / "seed_acf_zoom.csv").string(),
            zoom_window(seed_profile, seed_analysis.null_index));
    }
    summary["seed"] = metrics_json(seed_analysis, config.p);

    try {
        const Analysis best_analysis =
            analyze(best_profile, trace.final_coefficients, config.waveform,
                    config.p, config.region);
        if (config.outputs.acf) {
            write_correlation_csv(
                (dir / "optimized_acf_zoom.csv").string(),
                zoom_window(best_profile, best_analysis.null_index));
        }
        summary["optimized"] = metrics_json(best_analysis, config.p);
        summary["deltas"] = ordered_json{
            {"pslr_improvement_db", seed_analysis.pslr - best_analysis.pslr},
            {"isl_improvement_db",
             seed_analysis.isl_db - best_analysis.isl_db},
            {"gisl_improvement_db",
             seed_analysis.gisl_db - best_analysis.gisl_db},
            {"bandwidth_ratio",
             best_analysis.bandwidth / seed_analysis.bandwidth},
            {"null_shift_fraction",
             std::abs(best_analysis.null_index - seed_analysis.null_index) /
                 static_cast<double>(seed_analysis.null_index)},
        };
        write_json_file(dir / "summary.json", summary);
        if (!quiet) {
            print_metrics("seed", seed_analysis, config.p);
            print_metrics("optimized", best_analysis, config.p);
            std::printf("status %s   iterations %d   wall %.2f s   "
                        "PSLR improvement %.3f dB   bandwidth ratio %.4f\n",
                        status_name(trace.status).c_str(),
                        static_cast<int>(trace.iterations.size()),
                        trace.wall_time_s,
                        seed_analysis.pslr - best_analysis.pslr,
                        best_analysis.bandwidth / seed_analysis.bandwidth);
        }
        return trace.status == StopStatus::LineSearchStalled ? kExitStalled
                                                             : kExitOk;
    } catch (const Error& error) {
        const int code = exit_code_for_current_exception();
        if (code != kExitDegenerate) {
            throw;
        }
        summary["optimized_error"] = error.what();
        write_json_file(dir / "summary.json", summary);
        std::fprintf(stderr, "error: %s\n", error.what());
        return code;
    }
}

int cmd_evaluate(const std::string& design_path, const ScenarioConfig& config,
                 bool quiet)
{
    if (config.p < 2.0) {
        throw ValidationError("objective.p must be >= 2");
    }
    config.region.validate();
    config.outputs.validate();

    const CoefficientFile design = load_coefficients(design_path);
    const SampledWaveform waveform =
        synthesize_waveform(design.coefficients, design.config);
    const CorrelationProfile profile = autocorrelation(waveform);
    const Analysis a = analyze(profile, design.coefficients, design.config,
                               config.p, config.region);

    const fs::path dir = prepare_output_directory(config.outputs);
    emit_products(dir, "design", waveform, profile, config.outputs);

    ordered_json summary;
    summary["schema_version"] = 1;
    summary["command"] = "evaluate";
    summary["design_file"] = design_path;
    summary["status"] = "ok";
    summary["outer_fraction"] = config.region.outer_fraction;
    summary["design"] = metrics_json(a, config.p);
    write_json_file(dir / "summary.json", summary);
    if (!quiet) {
        print_metrics("design", a, config.p);
    }
    return kExitOk;
}

int cmd_gradcheck(const ScenarioConfig& config, bool quiet)
{
    const WaveformConfig& waveform = config.waveform;
    if (waveform.num_harmonics > kGradcheckMaxHarmonics) {
        throw ValidationError("gradcheck requires num_harmonics <= " +
                              std::to_string(kGradcheckMaxHarmonics));
    }
    const double target = rms_bandwidth(seed_coefficients(config), waveform);
    if (target <= 0.0) {
        throw ValidationError("gradcheck requires a positive bandwidth target");
    }

    struct CaseResult {
        double p;
        double scale;
        const char* route;
        double error;
    };
    std::vector<CaseResult> results;
    double max_error = 0.0;

    for (int trial = 0; trial < kGradcheckTrials; ++trial) {
        const CoefficientVector draw =
            generate_seed(waveform.num_harmonics, target, waveform.basis,
                          config.seed.rng_seed + static_cast<unsigned>(trial),
                          waveform.duration_s);
        for (const double p : {2.0, 20.0}) {
            const ObjectiveConfig anchored = make_objective_config(
                draw, waveform, p, config.region, config.gamma, config.delta);
            // Scales 1.3 and 0.7 land well outside the constraint band, so
            // finite differences never straddle the penalty kink.
            for (const double scale : {1.0, 1.3, 0.7}) {
                const RealVector point = draw.stacked() * scale;
                for (const bool penalized : {true, false}) {
                    ObjectiveConfig objective = anchored;
                    if (!penalized) {
                        objective.gamma = 0.0;
                    }
                    ObjectiveEvaluator evaluator(waveform, objective);
                    RealVector gradient;
                    evaluator.evaluate(point, gradient);
                    const RealVector fd = finite_difference_gradient(
                        [&](const RealVector& x) { return evaluator.value(x); },
                        point);
                    const double denom =
                        std::max(fd.cwiseAbs().maxCoeff(), 1e-300);
                    const double error =
                        (gradient - fd).cwiseAbs().maxCoeff() / denom;
                    max_error = std::max(max_error, error);
                    results.push_back(
                        {p, scale, penalized ? "penalized" : "ratio_only",
                         error});
                }
            }
        }
    }

    const bool pass = max_error < kGradcheckTolerance;
    ordered_json report;
    report["schema_version"] = 1;
    report["command"] = "gradcheck";
    report["num_harmonics"] = waveform.num_harmonics;
    report["tolerance"] = kGradcheckTolerance;
    report["max_relative_error"] = max_error;
    report["pass"] = pass;
    ordered_json cases = ordered_json::array();
    for (const CaseResult& result : results) {
        cases.push_back(ordered_json{
            {"p", result.p},
            {"scale", result.scale},
            {"route", result.route},
            {"max_relative_error", result.error},
        });
    }
    report["cases"] = cases;
    const fs::path dir = prepare_output_directory(config.outputs);
    write_json_file(dir / "gradcheck.json", report);

    if (!quiet) {
        for (const CaseResult& result : results) {
            std::printf("  p %4.1f   scale %.1f   %-10s   error %.3e\n",
                        result.p, result.scale, result.route, result.error);
        }
        std::printf("gradcheck: max relative error %.3e (tolerance %.0e): %s\n",
                    max_error, kGradcheckTolerance, pass ? "PASS" : "FAIL");
    }
    return pass ? kExitOk : kExitFailure;
}

int exit_code_for_current_exception()
{
    try {
        throw;
    } catch (const NoNullFound&) {
        return kExitDegenerate;
    } catch (const EmptyRegion&) {
        return kExitDegenerate;
    } catch (const LineSearchStalled&) {
        return kExitStalled;
    } catch (const IoError&) {
        return kExitIo;
    } catch (const Error&) {
        return kExitValidation;
    } catch (...) {
        return kExitFailure;
    }
}

} // namespace mtsfm::tools
