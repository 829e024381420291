#pragma once

#include <filesystem>
#include <string_view>

#include <nlohmann/json.hpp>

namespace hintloop {

// Minimal TOML reader covering the subset used by the config files: tables,
// arrays of tables, basic/literal strings, integers, floats, booleans,
// single- and multi-line arrays, and inline tables. Returns the document as
// a JSON object; throws InvalidConfig with a line number on syntax errors.
nlohmann::json parse_toml(std::string_view text);

nlohmann::json parse_toml_file(const std::filesystem::path& path);

}  // namespace hintloop
