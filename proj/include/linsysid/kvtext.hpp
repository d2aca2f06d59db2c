#pragma once

// Flat "key = value" text used for configs, sidecars and reports.

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace linsysid {

/// Shortest round-trip-safe form: 17 significant digits.
std::string format_real(double value);

/// Parses `key = value` lines. Blank lines and lines starting with '#' are
/// skipped. Malformed lines and repeated keys raise ConfigInvalid.
std::map<std::string, std::string> parse_key_values(std::istream& in);
std::map<std::string, std::string> read_key_value_file(const std::string& path);

std::string trim(const std::string& text);
std::vector<std::string> split(const std::string& text, char sep);

double parse_real(const std::string& text, const std::string& what);
std::vector<double> parse_real_list(const std::string& text, const std::string& what);
std::uint64_t parse_count(const std::string& text, const std::string& what);
std::vector<std::uint64_t> parse_count_list(const std::string& text, const std::string& what);

}  // namespace linsysid
