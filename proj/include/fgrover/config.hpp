#pragma once

#include "fgrover/cavity.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fgrover {

enum class RunMode { search, pulse_train, reference, analyze };

std::string to_string(RunMode mode);

/// Discrete-model run parameters (reference mode).
struct ReferenceOptions {
    double N = 4.0;
    double m = 1.0;
    int iterations = 1;
    double phase_oracle = 3.141592653589793;
    double phase_diffusion = 3.141592653589793;
};

struct AnalysisOptions {
    double numerical_aperture = 0.03;
    /// Overrides the Rayleigh resolution in the database-size bookkeeping.
    std::optional<double> resolution;
    int dims = 1;
    /// Invert the first maximum with the ideal pi/2 phase instead of the plate phase.
    bool ideal_phase_estimate = false;
};

/// One sweep axis: a dotted path into the configuration document
/// (e.g. "oracle_plate.flat_width_um") or "preset", and the values to take.
struct SweepAxis {
    std::string parameter;
    std::vector<nlohmann::json> values;
};

/// Fully expanded experiment description.
///
/// Every physical key carries its unit in its name (wavelength_nm,
/// flat_width_um, ...). Unknown keys are rejected at every nesting level.
struct ExperimentConfig {
    std::string preset;
    RunMode mode = RunMode::search;
    std::string output_dir = "out";
    CavityConfig cavity;
    /// false moves both phase lines out of the beam (zero phase depth).
    bool plates_in_beam = true;
    ReferenceOptions reference;
    AnalysisOptions analysis;
    std::vector<SweepAxis> sweep;
    int workers = 1;

    /// The user document this config was expanded from (preset not yet merged).
    nlohmann::json source = nlohmann::json::object();
    /// Preset-merged document with every default written out, in user units.
    nlohmann::json expanded = nlohmann::json::object();

    /// Cavity parameters actually simulated (plates zeroed when out of the beam).
    CavityConfig effective_cavity() const;
};

std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
const nlohmann::json& preset_document(const std::string& name);

/// Parses JSON text; parse errors report line and column.
nlohmann::json parse_config_text(const std::string& text);

/// Merges the named preset under the document, validates the schema and all
/// physical constraints, and fills defaults.
ExperimentConfig expand_config(const nlohmann::json& document);

/// Reads and expands a configuration file. Throws IoError when unreadable.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Complete, preset-free document that expands back to an equivalent config
/// (sweep axes omitted). Values keep full double precision.
nlohmann::json config_echo(const ExperimentConfig& config);

} // namespace fgrover
