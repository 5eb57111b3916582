#pragma once

#include "mimocep/cepstrum.hpp"
#include "mimocep/cstr.hpp"
#include "mimocep/lti.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace mimocep {

/// 17 significant digits; round-trips every double.
std::string format_double(double v);

/// Header row of labels, one sample per row. With a time column the first
/// column is `time_label` holding k * sample_time.
void write_signal_csv(const std::string& path, const SignalRecord& x, const std::string& time_label = "t");

struct CsvSelection {
    /// Column names to keep, in this order; empty keeps every data column.
    std::vector<std::string> columns;
    /// Sample range [begin, end).
    std::size_t begin = 0;
    std::size_t end = std::numeric_limits<std::size_t>::max();
};

/// Reads a signal CSV. A first column named t, t_min or time is taken as
/// the time axis (sample time from its first step) and not as a channel.
/// Throws IoError when the file cannot be read and ValidationError on
/// malformed content, citing the line number.
SignalRecord read_signal_csv(const std::string& path, const CsvSelection& sel = {});

/// Scenario layout: t_min, q, Tj, CA, T.
void write_scenario_csv(const std::string& path, const CstrDataset& d);
CstrDataset read_scenario_csv(const std::string& path);

/// Columns k, c, provenance, zeroth_reliable.
void write_cepstrum_csv(const std::string& path, const CepstrumSequence& c);
CepstrumSequence read_cepstrum_csv(const std::string& path);

/// White-noise input request attached to a model file.
struct InputSpec {
    std::size_t samples = 1 << 16;
    std::vector<double> gains;  ///< one per input; empty means all ones
    std::uint64_t seed = 1;
};

struct ModelFile {
    StateSpaceModel model;
    std::optional<InputSpec> input;
};

/// {"n","m","l","A","B","C","D"[, "input": {"samples","gains","seed"}]} with
/// row-major flat arrays. Field-level ValidationError on schema violations.
ModelFile parse_model_json(const std::string& text);
std::string model_to_json(const StateSpaceModel& model, const std::optional<InputSpec>& input = std::nullopt);

/// Keys mirror CstrConfig (V, k0, EoverR, dH, rho, Cp, UA0, operating_point,
/// noise_variances, fouling_start, fouling_slope, controller_on, Kp, Kd, Ki,
/// decoupler, sample_time, samples, seed, integrator_step, control_step,
/// windup_factor); missing keys keep their defaults, unknown keys are errors.
CstrConfig parse_cstr_config(const std::string& text);
std::string cstr_config_to_json(const CstrConfig& cfg);

/// True when the text is a JSON object carrying a state-space model ("A").
bool looks_like_model_json(const std::string& text);

std::string pole_zero_json(const std::vector<cplx>& poles, const std::vector<cplx>& zeros, double gain,
                           const std::vector<std::string>& warnings = {});

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace mimocep
