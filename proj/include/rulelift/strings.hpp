#pragma once

#include <string>
#include <string_view>

namespace rulelift {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);

// Full-match conversion; rejects trailing garbage, inf and nan.
bool parse_double(std::string_view s, double& out);

// Shortest representation that round-trips through parse_double.
std::string format_double(double v);

std::string format_hex64(std::uint64_t v);
bool parse_hex64(std::string_view s, std::uint64_t& out);

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 14695981039346656037ull);

}  // namespace rulelift
