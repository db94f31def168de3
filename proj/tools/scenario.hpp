// scenario.hpp - run configuration for the command-line tools.
//
// A scenario bundles everything a run needs: the waveform geometry, how to
// obtain seed coefficients, the sidelobe objective parameters, the
// optimizer schedule, and which artifacts to emit where. Scenarios travel
// as JSON (schema_version 1) and parse strictly: unknown fields anywhere
// in the document are rejected.

#pragma once

#include "mtsfm/correlation.hpp"
#include "mtsfm/optimizer.hpp"
#include "mtsfm/waveform.hpp"

#include <cstdint>
#include <string>

namespace mtsfm::tools {

/// How seed coefficients come to exist. Exactly one source is active:
/// random coefficients scaled to match a swept-bandwidth target, random
/// coefficients scaled to a mean-square bandwidth target, or an explicit
/// coefficient file.
enum class SeedKind {
    SweepBandwidth,
    BandwidthTarget,
    CoefficientFile,
};

struct SeedSpec {
    SeedKind kind = SeedKind::SweepBandwidth;
    std::uint64_t rng_seed = 1;
    double sweep_bandwidth_hz = 0.0;
    double mean_square_bandwidth = 0.0;
    std::string coefficient_file;

    void validate() const;
};

struct OutputSpec {
    std::string directory = ".";
    bool acf = true;
    bool spectrum = true;
    bool trace = true;
    bool ambiguity = false;
    int num_doppler = 41;
    double max_doppler_hz = 0.0; // 0 selects 8 / duration

    void validate() const;
};

struct ScenarioConfig {
    WaveformConfig waveform;
    SeedSpec seed;
    double p = 2.0;
    double gamma = 2.0;
    double delta = 0.1;
    RegionSpec region;
    OptimizerConfig optimizer;
    OutputSpec outputs;

    /// Validates every block up front so no run starts on a bad config.
    void validate() const;
};

/// Strict parse of a scenario file. Unknown fields, type mismatches, and
/// out-of-range values raise ValidationError with the JSON path; missing
/// files raise IoError.
ScenarioConfig load_scenario(const std::string& path);

/// Canonical serialized form: every field explicit, so
/// load(save(config)) reproduces config exactly.
std::string scenario_to_json(const ScenarioConfig& config);

void save_scenario(const std::string& path, const ScenarioConfig& config);

} // namespace mtsfm::tools
