// Command layer: strict JSON config parsing (unknown keys and non-finite
// numbers rejected before any computation), deterministic CSV/JSON
// emission (17 significant digits, '.' decimal, no locale), and the
// subcommand implementations wrapped around the other modules.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace fiberspin::cli {

using json = nlohmann::json;

/// Config-shape violation: unknown key, missing key, wrong type or a
/// non-finite number. Mapped to exit code 2 by the CLI.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Format { Default, Csv, Json };

struct CommandResult {
    std::string body;
    std::vector<std::string> warnings;
};

/// Round-trip-exact decimal formatting, %.17g with the C locale.
std::string format_double(double v);

/// Load and parse a config file; every number anywhere must be finite.
json load_config(const std::string& path);
json parse_config(const std::string& text);

CommandResult cmd_classify(const json& config, Format format = Format::Default);
CommandResult cmd_reduce(const json& config, Format format = Format::Default);
CommandResult cmd_simulate(const json& config, Format format = Format::Default);
CommandResult cmd_portrait(const json& config, Format format = Format::Default);
CommandResult cmd_propagate(const json& config, Format format = Format::Default);
CommandResult cmd_fibermode(const json& config, Format format = Format::Default);

}  // namespace fiberspin::cli
