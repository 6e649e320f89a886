#pragma once

#include "fgrover/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace fgrover {

extern const char* const artifact_version;

struct OutputFile {
    std::string name;
    std::string content;
};

/// Summary record plus the rendered output files (summary.json included).
struct RunOutput {
    nlohmann::json summary;
    std::vector<OutputFile> files;
};

/// Formats with 9 significant digits, the precision of every numeric output.
std::string format_number(double value);

/// Executes one configuration in its run mode. Pure: no filesystem access.
RunOutput run_experiment(const ExperimentConfig& config);

/// Runs the Cartesian product of the sweep axes (first axis varies slowest).
/// Points run on up to `workers` threads; results are assembled in point
/// order. With no axes this is a single run_experiment.
RunOutput run_sweep(const ExperimentConfig& config, int workers);

/// Writes every file into `directory`, creating it if needed. Throws IoError.
void write_outputs(const RunOutput& output, const std::filesystem::path& directory);

} // namespace fgrover
