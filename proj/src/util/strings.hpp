#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace util {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
bool contains(std::string_view haystack, std::string_view needle);

// Splits on a single-character delimiter; no trimming, keeps empty fields.
std::vector<std::string_view> split(std::string_view s, char delim);

// Splits into at most max_fields pieces; the last piece keeps any remaining
// delimiters (used for record formats whose final field is free text).
std::vector<std::string_view> split_limit(std::string_view s, char delim, std::size_t max_fields);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Shortest round-trip decimal form via std::to_chars; deterministic bytes.
std::string format_double(double v);

std::optional<double> parse_double(std::string_view s);
std::optional<std::int64_t> parse_int(std::string_view s);
std::optional<std::uint64_t> parse_u64(std::string_view s);

}  // namespace util
