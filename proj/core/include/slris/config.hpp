#pragma once

#include <filesystem>
#include <string>

#include "slris/experiment.hpp"

namespace slris {

/// Applies `key = value` lines from a flat text config to an experiment
/// configuration. `#` starts a comment; blank lines are skipped. Unknown
/// keys and unparsable values throw std::invalid_argument with the line
/// number. Keys mirror the scenario/experiment field names, e.g.:
///
///   d_ris_ud = 60      # meters, RIS_1 to desired user
///   theta    = 90      # degrees
///   K        = 1
///   N        = 256
///   p_i      = 10      # dBm
///   schemes  = Proposed,AlwaysOn,AlwaysOff
void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path);

/// Applies a single key; shared by the file parser and CLI overrides.
void set_config_key(ExperimentConfig& config, const std::string& key,
                    const std::string& value);

}  // namespace slris
