#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "edca/types.hpp"

namespace edca {

struct ConfigError : std::runtime_error {
  int line;
  ConfigError(const std::string& msg, int line_no)
      : std::runtime_error(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
};

/// Parses the scenario config format documented in README.md: top-level
/// key = value pairs plus one [phy] section and one [ac] section per class.
/// AC classes with flows = 0 are dropped. Throws ConfigError with the line
/// number and offending key on malformed input.
Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& path);

} // namespace edca
