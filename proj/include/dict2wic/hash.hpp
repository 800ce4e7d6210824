#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace dict2wic {

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

// FNV-1a, used only to derive sub-seeds from labels.
std::uint64_t fnv1a64(std::string_view data);

}  // namespace dict2wic
