#pragma once

#include "rphd/harness.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rphd::config {

/// Raised for malformed or invalid configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Names accepted by preset(): "paper-np200" and "paper-np1000".
std::vector<std::string> preset_names();

/// The four-target benchmark with basic, separate and direct (0.4 on both
/// velocities) arms, 100 trials of 40 steps.
harness::RunConfig preset(std::string_view name);

/// Applies one dotted key. Throws ConfigError for unknown keys or bad values.
void apply_setting(harness::RunConfig& config, std::string_view key, std::string_view value);

/// `key = value` lines; `#` starts a comment. A `preset` key is applied first,
/// then `roughening.variants`, then every other key in file order. Without a
/// `preset` key the paper-np200 preset is the base.
std::vector<std::pair<std::string, std::string>> parse_pairs(std::string_view text);
harness::RunConfig parse(std::string_view text);
harness::RunConfig load(const std::string& path);

/// Every key of the config in the text format accepted by parse().
std::string to_text(const harness::RunConfig& config);

}  // namespace rphd::config
