#include "mtsfm/io.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <vector>

namespace mtsfm {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr double kDbFloor = -400.0;

class OutputFile {
public:
    explicit OutputFile(const std::string& path)
        : file_(std::fopen(path.c_str(), "w")), path_(path)
    {
        if (file_ == nullptr) {
            throw IoError("cannot open " + path + " for writing");
        }
    }

    OutputFile(const OutputFile&) = delete;
    OutputFile& operator=(const OutputFile&) = delete;

    ~OutputFile()
    {
        if (file_ != nullptr) {
            std::fclose(file_);
        }
    }

    std::FILE* get() { return file_; }

    /// Flushes and closes; throws IoError if any write failed.
    void close()
    {
        const bool failed =
            std::ferror(file_) != 0 || std::fclose(file_) != 0;
        file_ = nullptr;
        if (failed) {
            throw IoError("failed writing " + path_);
        }
    }

private:
    std::FILE* file_;
    std::string path_;
};

void check_known_fields(const json& object,
                        std::initializer_list<const char*> allowed,
                        const std::string& where)
{
    for (const auto& item : object.items()) {
        const bool known =
            std::any_of(allowed.begin(), allowed.end(),
                        [&](const char* name) { return item.key() == name; });
        if (!known) {
            throw ValidationError(where + ": unknown field \"" + item.key() +
                                  "\"");
        }
    }
}

const json& require_field(const json& object, const char* key,
                          const std::string& where)
{
    const auto it = object.find(key);
    if (it == object.end()) {
        throw ValidationError(where + ": missing field \"" + key + "\"");
    }
    return *it;
}

double require_number(const json& object, const char* key,
                      const std::string& where)
{
    const json& field = require_field(object, key, where);
    if (!field.is_number()) {
        throw ValidationError(where + "." + key + ": expected a number");
    }
    return field.get<double>();
}

int require_int(const json& object, const char* key, const std::string& where)
{
    const json& field = require_field(object, key, where);
    if (!field.is_number_integer()) {
        throw ValidationError(where + "." + key + ": expected an integer");
    }
    return field.get<int>();
}

std::string require_string(const json& object, const char* key,
                           const std::string& where)
{
    const json& field = require_field(object, key, where);
    if (!field.is_string()) {
        throw ValidationError(where + "." + key + ": expected a string");
    }
    return field.get<std::string>();
}

RealVector require_number_array(const json& object, const char* key,
                                int expected_length, const std::string& where)
{
    const json& field = require_field(object, key, where);
    if (!field.is_array() ||
        static_cast<int>(field.size()) != expected_length) {
        throw ValidationError(where + "." + key + ": expected an array of " +
                              std::to_string(expected_length) + " numbers");
    }
    RealVector values(expected_length);
    for (int i = 0; i < expected_length; ++i) {
        if (!field[i].is_number()) {
            throw ValidationError(where + "." + key + "[" +
                                  std::to_string(i) +
                                  "]: expected a number");
        }
        values[i] = field[i].get<double>();
    }
    return values;
}

double floored_db(double db)
{
    return std::max(db, kDbFloor);
}

} // namespace

std::string to_string(BasisKind kind)
{
    switch (kind) {
    case BasisKind::CosineOnly:
        return "cosine_only";
    case BasisKind::SineOnly:
        return "sine_only";
    case BasisKind::Full:
        return "full";
    }
    throw ValidationError("unrepresentable basis kind");
}

std::string to_string(TaperKind kind)
{
    switch (kind) {
    case TaperKind::None:
        return "none";
    case TaperKind::Tukey:
        return "tukey";
    }
    throw ValidationError("unrepresentable taper kind");
}

BasisKind basis_from_string(const std::string& name)
{
    if (name == "cosine_only") {
        return BasisKind::CosineOnly;
    }
    if (name == "sine_only") {
        return BasisKind::SineOnly;
    }
    if (name == "full") {
        return BasisKind::Full;
    }
    throw ValidationError("unknown basis \"" + name +
                          "\" (expected full, sine_only, or cosine_only)");
}

TaperKind taper_from_string(const std::string& name)
{
    if (name == "none") {
        return TaperKind::None;
    }
    if (name == "tukey") {
        return TaperKind::Tukey;
    }
    throw ValidationError("unknown taper \"" + name +
                          "\" (expected none or tukey)");
}

void save_coefficients(const std::string& path,
                       const CoefficientVector& coeffs,
                       const WaveformConfig& config)
{
    config.validate();
    if (coeffs.num_harmonics() != config.num_harmonics) {
        throw DimensionError("save_coefficients: coefficient vector has " +
                             std::to_string(coeffs.num_harmonics()) +
                             " harmonics, config expects " +
                             std::to_string(config.num_harmonics));
    }

    std::vector<double> alpha(static_cast<std::size_t>(config.num_harmonics));
    std::vector<double> beta(alpha.size());
    for (int l = 1; l <= config.num_harmonics; ++l) {
        alpha[l - 1] = coeffs.alpha(l);
        beta[l - 1] = coeffs.beta(l);
    }

    ordered_json root;
    root["schema_version"] = 1;
    root["duration_s"] = config.duration_s;
    root["sample_rate_hz"] = config.sample_rate_hz;
    root["num_harmonics"] = config.num_harmonics;
    root["basis"] = to_string(config.basis);
    root["constant_phase"] = config.constant_phase;
    root["taper"] = ordered_json{{"kind", to_string(config.taper.kind)},
                                 {"tukey_alpha", config.taper.tukey_alpha}};
    root["alpha"] = alpha;
    root["beta"] = beta;

    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    out << root.dump(2) << '\n';
    if (!out) {
        throw IoError("failed writing " + path);
    }
}

CoefficientFile load_coefficients(const std::string& path)
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
                       {"schema_version", "duration_s", "sample_rate_hz",
                        "num_harmonics", "basis", "constant_phase", "taper",
                        "alpha", "beta"},
                       path);

    const int version = require_int(root, "schema_version", path);
    if (version != 1) {
        throw ValidationError(path + ": unsupported schema_version " +
                              std::to_string(version));
    }

    CoefficientFile file;
    file.config.duration_s = require_number(root, "duration_s", path);
    file.config.sample_rate_hz = require_number(root, "sample_rate_hz", path);
    file.config.num_harmonics = require_int(root, "num_harmonics", path);
    file.config.basis = basis_from_string(require_string(root, "basis", path));
    file.config.constant_phase = require_number(root, "constant_phase", path);

    const json& taper = require_field(root, "taper", path);
    if (!taper.is_object()) {
        throw ValidationError(path + ".taper: expected an object");
    }
    check_known_fields(taper, {"kind", "tukey_alpha"}, path + ".taper");
    file.config.taper.kind =
        taper_from_string(require_string(taper, "kind", path + ".taper"));
    file.config.taper.tukey_alpha =
        require_number(taper, "tukey_alpha", path + ".taper");

    file.config.validate();
    const int harmonics = file.config.num_harmonics;
    const RealVector alpha =
        require_number_array(root, "alpha", harmonics, path);
    const RealVector beta = require_number_array(root, "beta", harmonics, path);
    if (file.config.basis == BasisKind::SineOnly && !alpha.isZero(0.0)) {
        throw ValidationError(
            path + ": alpha must be all zero for a sine_only basis");
    }
    if (file.config.basis == BasisKind::CosineOnly && !beta.isZero(0.0)) {
        throw ValidationError(
            path + ": beta must be all zero for a cosine_only basis");
    }
    file.coefficients = CoefficientVector(alpha, beta);
    return file;
}

void write_correlation_csv(const std::string& path,
                           const CorrelationProfile& profile)
{
    OutputFile out(path);
    std::fprintf(out.get(), "lag_seconds,real,imag,magnitude_db\n");
    for (int i = 0; i < profile.num_lags(); ++i) {
        const Complex value = profile.values[i];
        std::fprintf(out.get(), "%.17g,%.17g,%.17g,%.17g\n",
                     profile.lag_seconds(i), value.real(), value.imag(),
                     floored_db(amplitude_db(std::abs(value))));
    }
    out.close();
}

void write_spectrum_csv(const std::string& path, const PowerSpectrum& spectrum)
{
    OutputFile out(path);
    std::fprintf(out.get(), "freq_hz,power_db\n");
    for (Eigen::Index i = 0; i < spectrum.freq_hz.size(); ++i) {
        std::fprintf(out.get(), "%.17g,%.17g\n", spectrum.freq_hz[i],
                     floored_db(power_db(spectrum.power[i])));
    }
    out.close();
}

void write_trace_csv(const std::string& path, const RunTrace& trace)
{
    OutputFile out(path);
    std::fprintf(out.get(),
                 "iteration,objective_before,gisl_before,penalty_before,"
                 "gradient_norm,c1,c2,step,backtracks,objective_after\n");
    for (const IterationRecord& record : trace.iterations) {
        std::fprintf(out.get(),
                     "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g\n",
                     record.iteration, record.objective_before,
                     record.gisl_before, record.penalty_before,
                     record.gradient_norm, record.c1, record.c2, record.step,
                     record.backtracks, record.objective_after);
    }
    out.close();
}

void write_ambiguity_csv(const std::string& path,
                         const AmbiguitySurface& surface)
{
    OutputFile out(path);
    std::fprintf(out.get(), "delay_s,doppler_hz,magnitude_db\n");
    for (Eigen::Index i = 0; i < surface.delay_s.size(); ++i) {
        for (Eigen::Index j = 0; j < surface.doppler_hz.size(); ++j) {
            std::fprintf(out.get(), "%.17g,%.17g,%.17g\n", surface.delay_s[i],
                         surface.doppler_hz[j],
                         floored_db(amplitude_db(surface.magnitude(i, j))));
        }
    }
    out.close();
}

} // namespace mtsfm
