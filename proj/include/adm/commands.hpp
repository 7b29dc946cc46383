#pragma once

#include <string>
#include <string_view>

#include "adm/config.hpp"

namespace adm {

// Each command validates the whole config first (ConfigError on bad values)
// and returns the CSV text, starting with the config-hash line.
struct CommandResult {
  std::string csv;
  std::string summary;  // human-readable, for stdout
};

CommandResult cmd_ber(const Config& cfg);
CommandResult cmd_thresholds(const Config& cfg);
CommandResult cmd_regions(const Config& cfg);
CommandResult cmd_spec_eff(const Config& cfg);
CommandResult cmd_e2e(const Config& cfg);
CommandResult cmd_mapping_dump(const Config& cfg);

CommandResult run_command(std::string_view name, const Config& cfg);
std::string default_output_name(std::string_view name);

}  // namespace adm
