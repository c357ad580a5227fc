#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdde/config.hpp"
#include "sdde/csv.hpp"

namespace sdde {

/// Command-line overrides applied on top of the config file.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> workers;
};

const char* toolkit_version();

/// Runs one experiment and returns its tables. Results depend on the config
/// only, never on `workers`.
std::vector<CsvTable> run_experiment(const ExperimentConfig& config, std::size_t workers);

/// Metadata block written above every table.
CsvMetadata experiment_metadata(const ExperimentConfig& config, const CsvTable& table);

/// Applies overrides, runs, and writes <out>/<table>.csv for each table.
/// Returns the written paths.
std::vector<std::string> run_and_write(ExperimentConfig config, const RunOverrides& overrides);

}  // namespace sdde
