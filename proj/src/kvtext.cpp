#include "linsysid/kvtext.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "linsysid/errors.hpp"

namespace linsysid {

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string trim(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(trim(text.substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigInvalid("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = trim(body.substr(0, eq));
    if (key.empty()) {
      throw ConfigInvalid("line " + std::to_string(line_no) + ": empty key");
    }
    if (!entries.emplace(key, trim(body.substr(eq + 1))).second) {
      throw ConfigInvalid("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return entries;
}

std::map<std::string, std::string> read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return parse_key_values(in);
}

double parse_real(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
    throw ConfigInvalid(what + ": '" + text + "' is not a real number");
  }
  return value;
}

std::vector<double> parse_real_list(const std::string& text, const std::string& what) {
  std::vector<double> values;
  for (const auto& part : split(text, ',')) values.push_back(parse_real(part, what));
  return values;
}

std::uint64_t parse_count(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  if (t.empty() || t.front() == '-') {
    throw ConfigInvalid(what + ": '" + text + "' is not a nonnegative integer");
  }
  const unsigned long long value = std::strtoull(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size() || errno == ERANGE) {
    throw ConfigInvalid(what + ": '" + text + "' is not a nonnegative integer");
  }
  return value;
}

std::vector<std::uint64_t> parse_count_list(const std::string& text, const std::string& what) {
  std::vector<std::uint64_t> values;
  for (const auto& part : split(text, ',')) values.push_back(parse_count(part, what));
  return values;
}

}  // namespace linsysid
