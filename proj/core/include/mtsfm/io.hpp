// io.hpp - serialization of designs and analysis products.
//
// Designs travel as JSON (schema_version 1) carrying both the coefficient
// vector and the rendering configuration, so a file is sufficient to
// reproduce the waveform. Analysis products (correlation, spectrum,
// iteration trace, delay-Doppler surface) are written as plain CSV with
// full-precision floats.

#pragma once

#include "mtsfm/correlation.hpp"
#include "mtsfm/optimizer.hpp"
#include "mtsfm/types.hpp"
#include "mtsfm/waveform.hpp"

#include <string>

namespace mtsfm {

struct CoefficientFile {
    WaveformConfig config;
    CoefficientVector coefficients;
};

std::string to_string(BasisKind kind);
std::string to_string(TaperKind kind);

/// Throws ValidationError on unknown names ("full", "sine_only",
/// "cosine_only").
BasisKind basis_from_string(const std::string& name);

/// Throws ValidationError on unknown names ("none", "tukey").
TaperKind taper_from_string(const std::string& name);

/// Writes the design as JSON. Throws IoError on filesystem failure,
/// DimensionError if coefficients and config disagree on harmonic count.
void save_coefficients(const std::string& path,
                       const CoefficientVector& coeffs,
                       const WaveformConfig& config);

/// Parses and validates a design file. Unknown or missing fields, type
/// mismatches, and coefficients inconsistent with the declared basis kind
/// are rejected with ValidationError; filesystem failures raise IoError.
CoefficientFile load_coefficients(const std::string& path);

/// Columns: lag_seconds, real, imag, magnitude_db (floored at -400 dB).
void write_correlation_csv(const std::string& path,
                           const CorrelationProfile& profile);

/// Columns: freq_hz, power_db (floored at -400 dB).
void write_spectrum_csv(const std::string& path,
                        const PowerSpectrum& spectrum);

/// Columns: iteration, objective_before, gisl_before, penalty_before,
/// gradient_norm, c1, c2, step, backtracks, objective_after.
void write_trace_csv(const std::string& path, const RunTrace& trace);

/// Long-format surface: delay_s, doppler_hz, magnitude_db (floored at
/// -400 dB), delay-major.
void write_ambiguity_csv(const std::string& path,
                         const AmbiguitySurface& surface);

} // namespace mtsfm
