#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nocsec::tools {

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) noexcept;
std::uint64_t fnv1a64(std::string_view text) noexcept;
std::string hex64(std::uint64_t v);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, std::string_view text);

}  // namespace nocsec::tools
