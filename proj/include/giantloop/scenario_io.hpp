#pragma once

// JSON form of ScenarioConfig. Documented in docs/scenario_schema.md.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "giantloop/core.hpp"

namespace giantloop {

/// Malformed input: bad JSON syntax (line set) or a bad/unknown field (field set).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::optional<std::size_t> line, std::string field);

    const std::optional<std::size_t>& line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    std::optional<std::size_t> line_;
    std::string field_;
};

/// Reads a number, optionally scaled by pi: "0.25", "pi", "-pi/2", "10pi", "1.5pi/4".
/// Returns nullopt for anything else.
std::optional<double> parse_scaled_number(std::string_view text);

/// Parses and validates. Throws ParseError or ValidationError.
ScenarioConfig parse_scenario_text(std::string_view text);
ScenarioConfig parse_scenario(const std::filesystem::path& path);

/// Pretty-printed JSON that parse_scenario_text maps back to an identical config.
std::string scenario_to_json(const ScenarioConfig& cfg);

}  // namespace giantloop
