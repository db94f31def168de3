#include "scenario.hpp"

#include "json_schema.hpp"
#include "mtsfm/io.hpp"

#include <fstream>

namespace mtsfm::tools {

namespace {

WaveformConfig parse_waveform(const json& block, const std::string& where)
{
    check_known_fields(block,
                       {"duration_s", "sample_rate_hz", "num_harmonics",
                        "basis", "constant_phase", "taper"},
                       where);
    WaveformConfig config;
    config.duration_s = require_number(block, "duration_s", where);
    config.sample_rate_hz = require_number(block, "sample_rate_hz", where);
    config.num_harmonics = require_int(block, "num_harmonics", where);
    config.basis = basis_from_string(require_string(block, "basis", where));
    config.constant_phase =
        optional_number(block, "constant_phase", 0.0, where);
    if (block.contains("taper")) {
        const json& taper = require_object(block, "taper", where);
        const std::string taper_where = where + ".taper";
        check_known_fields(taper, {"kind", "tukey_alpha"}, taper_where);
        config.taper.kind =
            taper_from_string(require_string(taper, "kind", taper_where));
        config.taper.tukey_alpha =
            optional_number(taper, "tukey_alpha", 0.0, taper_where);
    }
    return config;
}

SeedSpec parse_seed(const json& block, const std::string& where)
{
    check_known_fields(block,
                       {"rng_seed", "sweep_bandwidth_hz",
                        "mean_square_bandwidth", "coefficient_file"},
                       where);
    SeedSpec seed;
    seed.rng_seed = optional_uint64(block, "rng_seed", 1, where);

    const int sources = static_cast<int>(block.contains("sweep_bandwidth_hz")) +
                        static_cast<int>(block.contains("mean_square_bandwidth")) +
                        static_cast<int>(block.contains("coefficient_file"));
    if (sources != 1) {
        throw ValidationError(
            where + ": exactly one of sweep_bandwidth_hz, "
                    "mean_square_bandwidth, coefficient_file is required");
    }
    if (block.contains("sweep_bandwidth_hz")) {
        seed.kind = SeedKind::SweepBandwidth;
        seed.sweep_bandwidth_hz =
            require_number(block, "sweep_bandwidth_hz", where);
    } else if (block.contains("mean_square_bandwidth")) {
        seed.kind = SeedKind::BandwidthTarget;
        seed.mean_square_bandwidth =
            require_number(block, "mean_square_bandwidth", where);
    } else {
        seed.kind = SeedKind::CoefficientFile;
        seed.coefficient_file =
            require_string(block, "coefficient_file", where);
    }
    return seed;
}

OptimizerConfig parse_optimizer(const json& block, const std::string& where)
{
    check_known_fields(block,
                       {"initial_step", "sufficient_decrease", "momentum",
                        "step_shrink", "step_grow", "max_iterations",
                        "gradient_tolerance", "max_backtracks"},
                       where);
    OptimizerConfig config;
    config.initial_step =
        optional_number(block, "initial_step", config.initial_step, where);
    config.sufficient_decrease = optional_number(
        block, "sufficient_decrease", config.sufficient_decrease, where);
    config.momentum =
        optional_number(block, "momentum", config.momentum, where);
    config.step_shrink =
        optional_number(block, "step_shrink", config.step_shrink, where);
    config.step_grow =
        optional_number(block, "step_grow", config.step_grow, where);
    config.max_iterations =
        optional_int(block, "max_iterations", config.max_iterations, where);
    config.gradient_tolerance = optional_number(
        block, "gradient_tolerance", config.gradient_tolerance, where);
    config.max_backtracks =
        optional_int(block, "max_backtracks", config.max_backtracks, where);
    return config;
}

OutputSpec parse_outputs(const json& block, const std::string& where)
{
    check_known_fields(block,
                       {"directory", "acf", "spectrum", "trace", "ambiguity",
                        "num_doppler", "max_doppler_hz"},
                       where);
    OutputSpec outputs;
    if (block.contains("directory")) {
        outputs.directory = require_string(block, "directory", where);
    }
    outputs.acf = optional_bool(block, "acf", outputs.acf, where);
    outputs.spectrum =
        optional_bool(block, "spectrum", outputs.spectrum, where);
    outputs.trace = optional_bool(block, "trace", outputs.trace, where);
    outputs.ambiguity =
        optional_bool(block, "ambiguity", outputs.ambiguity, where);
    outputs.num_doppler =
        optional_int(block, "num_doppler", outputs.num_doppler, where);
    outputs.max_doppler_hz = optional_number(block, "max_doppler_hz",
                                             outputs.max_doppler_hz, where);
    return outputs;
}

} // namespace

void SeedSpec::validate() const
{
    switch (kind) {
    case SeedKind::SweepBandwidth:
        if (sweep_bandwidth_hz < 0.0) {
            throw ValidationError("seed.sweep_bandwidth_hz must be >= 0");
        }
        return;
    case SeedKind::BandwidthTarget:
        if (mean_square_bandwidth < 0.0) {
            throw ValidationError("seed.mean_square_bandwidth must be >= 0");
        }
        return;
    case SeedKind::CoefficientFile:
        if (coefficient_file.empty()) {
            throw ValidationError("seed.coefficient_file must not be empty");
        }
        return;
    }
    throw ValidationError("unrepresentable seed kind");
}

void OutputSpec::validate() const
{
    if (directory.empty()) {
        throw ValidationError("outputs.directory must not be empty");
    }
    if (num_doppler < 1) {
        throw ValidationError("outputs.num_doppler must be >= 1");
    }
    if (max_doppler_hz < 0.0) {
        throw ValidationError("outputs.max_doppler_hz must be >= 0");
    }
}

void ScenarioConfig::validate() const
{
    waveform.validate();
    seed.validate();
    if (p < 2.0) {
        throw ValidationError("objective.p must be >= 2");
    }
    if (gamma < 0.0) {
        throw ValidationError("objective.gamma must be >= 0");
    }
    if (delta < 0.0 || delta >= 1.0) {
        throw ValidationError("objective.delta must lie in [0, 1)");
    }
    region.validate();
    optimizer.validate();
    outputs.validate();
}

ScenarioConfig load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& error) {
        throw ValidationError(path + ": " + error.what());
    }
    if (!root.is_object()) {
        throw ValidationError(path + ": top level must be an object");
    }
    check_known_fields(root,
                       {"schema_version", "waveform", "seed", "objective",
                        "optimizer", "outputs"},
                       path);
    const int version = require_int(root, "schema_version", path);
    if (version != 1) {
        throw ValidationError(path + ": unsupported schema_version " +
                              std::to_string(version));
    }

    ScenarioConfig config;
    config.waveform = parse_waveform(require_object(root, "waveform", path),
                                     path + ".waveform");
    config.seed =
        parse_seed(require_object(root, "seed", path), path + ".seed");

    const json& objective = require_object(root, "objective", path);
    const std::string objective_where = path + ".objective";
    check_known_fields(objective, {"p", "gamma", "delta", "outer_fraction"},
                       objective_where);
    config.p = require_number(objective, "p", objective_where);
    config.gamma =
        optional_number(objective, "gamma", config.gamma, objective_where);
    config.delta =
        optional_number(objective, "delta", config.delta, objective_where);
    config.region.outer_fraction =
        optional_number(objective, "outer_fraction",
                        config.region.outer_fraction, objective_where);

    if (root.contains("optimizer")) {
        config.optimizer = parse_optimizer(
            require_object(root, "optimizer", path), path + ".optimizer");
    }
    if (root.contains("outputs")) {
        config.outputs = parse_outputs(require_object(root, "outputs", path),
                                       path + ".outputs");
    }

    config.validate();
    return config;
}

std::string scenario_to_json(const ScenarioConfig& config)
{
    ordered_json root;
    root["schema_version"] = 1;

    ordered_json waveform;
    waveform["duration_s"] = config.waveform.duration_s;
    waveform["sample_rate_hz"] = config.waveform.sample_rate_hz;
    waveform["num_harmonics"] = config.waveform.num_harmonics;
    waveform["basis"] = to_string(config.waveform.basis);
    waveform["constant_phase"] = config.waveform.constant_phase;
    waveform["taper"] =
        ordered_json{{"kind", to_string(config.waveform.taper.kind)},
                     {"tukey_alpha", config.waveform.taper.tukey_alpha}};
    root["waveform"] = waveform;

    ordered_json seed;
    seed["rng_seed"] = config.seed.rng_seed;
    switch (config.seed.kind) {
    case SeedKind::SweepBandwidth:
        seed["sweep_bandwidth_hz"] = config.seed.sweep_bandwidth_hz;
        break;
    case SeedKind::BandwidthTarget:
        seed["mean_square_bandwidth"] = config.seed.mean_square_bandwidth;
        break;
    case SeedKind::CoefficientFile:
        seed["coefficient_file"] = config.seed.coefficient_file;
        break;
    }
    root["seed"] = seed;

    root["objective"] = ordered_json{
        {"p", config.p},
        {"gamma", config.gamma},
        {"delta", config.delta},
        {"outer_fraction", config.region.outer_fraction},
    };
    root["optimizer"] = ordered_json{
        {"initial_step", config.optimizer.initial_step},
        {"sufficient_decrease", config.optimizer.sufficient_decrease},
        {"momentum", config.optimizer.momentum},
        {"step_shrink", config.optimizer.step_shrink},
        {"step_grow", config.optimizer.step_grow},
        {"max_iterations", config.optimizer.max_iterations},
        {"gradient_tolerance", config.optimizer.gradient_tolerance},
        {"max_backtracks", config.optimizer.max_backtracks},
    };
    root["outputs"] = ordered_json{
        {"directory", config.outputs.directory},
        {"acf", config.outputs.acf},
        {"spectrum", config.outputs.spectrum},
        {"trace", config.outputs.trace},
        {"ambiguity", config.outputs.ambiguity},
        {"num_doppler", config.outputs.num_doppler},
        {"max_doppler_hz", config.outputs.max_doppler_hz},
    };
    return root.dump(2) + "\n";
}

void save_scenario(const std::string& path, const ScenarioConfig& config)
{
    config.validate();
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    out << scenario_to_json(config);
    if (!out) {
        throw IoError("failed writing " + path);
    }
}

} // namespace mtsfm::tools
