#pragma once
#include <filesystem>
#include <string>
#include <string_view>

#include "tbyb/harness.hpp"

namespace tbyb {

struct ExperimentConfig {
  ExperimentGrid grid;
  std::string experiment_file = "experiment.csv";
  std::string sequence_file = "sequence.csv";
  std::string manifest_file = "manifest.json";
};

// Parses an experiment document (see docs/config.md). Relative table and
// catalog paths resolve against base_dir. Unknown keys are rejected. Throws ConfigError.
ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir);

// Throws IoError if the file cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

} // namespace tbyb
