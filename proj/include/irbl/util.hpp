#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace irbl {

// Parses ISO-8601 timestamps ("2020-01-09T14:30:00Z", "2020-01-09T14:30:00+01:00",
// "2020-01-09") into UTC epoch seconds. Throws Error(MalformedTimestamp).
std::int64_t parse_iso8601(std::string_view s);

// Epoch seconds -> "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(std::int64_t epoch_seconds);

std::string to_lower(std::string_view s);

bool ends_with_ci(std::string_view s, std::string_view suffix);

// File extension including the dot, lowercased ("src/A.JAVA" -> ".java").
std::string path_extension(std::string_view path);

// FNV-1a 64-bit, used for run-manifest content hashes.
std::uint64_t fnv1a64(std::string_view data);
std::uint64_t fnv1a64_file(const std::filesystem::path& p);
std::string hex64(std::uint64_t v);

// Writes via a temp file in the same directory, then renames over the target.
void atomic_write_file(const std::filesystem::path& target, std::string_view content);

std::string read_file(const std::filesystem::path& p);

std::vector<std::string> split(std::string_view s, char sep);

}  // namespace irbl
