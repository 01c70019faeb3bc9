#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relq/report.hpp"

namespace relq {

/// Raised for anything that should exit with code 2 (bad flags, bad values,
/// unreadable files).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::map<std::string, double> numbers;       // validated per command
    std::map<std::string, std::string> strings;  // which, scheme, ...
    std::optional<std::uint64_t> seed;
    std::string format = "json";
    std::string output_path;                     // empty = stdout
    std::map<std::string, std::string> provenance;
};

/// Flags, then config-file values, then defaults; flags win and the
/// provenance map records where each value came from. Unknown commands or
/// keys raise ConfigError.
RunConfig parse_config(const std::vector<std::string>& args);

Report run_command(const RunConfig& cfg);

std::string usage_text();

}  // namespace relq
