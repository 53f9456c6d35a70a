#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace irbl {

// Minimal RFC-4180 style CSV. Fields containing ',', '"' or newlines are quoted;
// embedded quotes are doubled.
std::string csv_escape(const std::string& field);
std::string csv_row(const std::vector<std::string>& fields);

// Parses a whole CSV document into rows of fields. Handles quoted fields and
// both \n and \r\n line endings. Empty trailing line is ignored.
std::vector<std::vector<std::string>> parse_csv(const std::string& content);

std::vector<std::vector<std::string>> read_csv_file(const std::filesystem::path& p);

}  // namespace irbl
