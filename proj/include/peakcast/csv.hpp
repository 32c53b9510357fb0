#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace peakcast {

// Splits one CSV line on commas. The project's file schemas never quote
// fields, so no quote handling is needed or attempted.
std::vector<std::string_view> split_csv(std::string_view line);

// Strict numeric parsing; the whole field must be consumed.
double parse_double(std::string_view field, int line_no, const char* column);
std::optional<double> parse_optional_double(std::string_view field, int line_no, const char* column);
int parse_int(std::string_view field, int line_no, const char* column);

// Shortest representation that round-trips exactly (std::to_chars).
std::string format_double(double v);

std::string_view trim(std::string_view s);

// Reads a whole file; raises io_error if it cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

// 64-bit FNV-1a over raw bytes; used for manifest input/output hashes.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(std::string_view bytes);

}  // namespace peakcast
