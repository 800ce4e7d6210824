#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace dict2wic::io {

std::string read_file(const std::filesystem::path& path);

// Writes through a temporary file and renames it into place.
void write_file(const std::filesystem::path& path, std::string_view content);

// Calls `fn(line_number, line)` for every non-blank line.
void for_each_line(std::string_view content,
                   const std::function<void(std::size_t, std::string_view)>& fn);

// Parses every non-blank line as JSON; malformed lines raise ParseError.
void for_each_json_line(
    std::string_view content,
    const std::function<void(std::size_t, const nlohmann::json&)>& fn);

}  // namespace dict2wic::io
