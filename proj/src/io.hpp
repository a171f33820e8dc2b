#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace sdglens::io {

using Json = nlohmann::json;

std::string read_file(const std::filesystem::path& path);

// Writes through a temporary sibling and renames, so readers never observe a
// half-written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::vector<Json> read_jsonl(const std::filesystem::path& path);
std::string to_jsonl(const std::vector<Json>& rows);

// Shortest round-trip decimal form; identical on every platform.
std::string format_double(double value);

// RFC 4180 field quoting.
std::string csv_field(std::string_view field);
std::string csv_row(const std::vector<std::string>& fields);

// RFC 4180 reader. Accepts LF or CRLF line endings; quoted fields may span lines.
std::vector<std::vector<std::string>> parse_csv(std::string_view content);

}  // namespace sdglens::io
