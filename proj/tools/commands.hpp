// commands.hpp - subcommand implementations behind the CLI front end.
//
// Each command takes a validated scenario, performs its run, writes its
// artifacts under the configured output directory, and returns a process
// exit code from the shared contract below.

#pragma once

#include "scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace mtsfm::tools {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitDegenerate = 3;
inline constexpr int kExitStalled = 4;
inline constexpr int kExitIo = 5;

/// Command-line overrides layered on top of the scenario file.
struct Overrides {
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> rng_seed;
    std::optional<double> p;
    std::optional<double> outer_fraction;
};

void apply_overrides(ScenarioConfig& config, const Overrides& overrides);

/// Renders the seed design; writes seed.json, ACF and spectrum data, and a
/// metric summary. A degenerate autocorrelation (no detectable mainlobe
/// null) still leaves the data files behind and exits with the degeneracy
/// code.
int cmd_synth(const ScenarioConfig& config, bool quiet);

/// Runs the descent from the scenario seed; writes before/after designs,
/// ACFs, zoomed ACFs, spectra, the iteration trace, and a delta summary.
/// A stalled line search still writes everything and exits with the stall
/// code.
int cmd_optimize(const ScenarioConfig& config, bool quiet);

/// Loads a design file and reports its metrics under the scenario's
/// objective settings (waveform geometry comes from the design file; the
/// scenario's waveform, seed, and optimizer blocks are ignored).
int cmd_evaluate(const std::string& design_path, const ScenarioConfig& config,
                 bool quiet);

/// Compares analytic gradients against central finite differences over
/// randomized coefficient draws, both norm orders, and both feasibility
/// regimes. Exits nonzero when the worst relative error exceeds the pinned
/// tolerance.
int cmd_gradcheck(const ScenarioConfig& config, bool quiet);

/// Maps the exception currently in flight onto the exit-code contract.
/// Call only from a catch block.
int exit_code_for_current_exception();

} // namespace mtsfm::tools
