#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace shapsec {

// A configuration problem tied to a field and, when it came from a file, a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& detail, const std::string& source = {},
              int line = 0);
  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

struct ConfigEntry {
  std::string value;
  std::string source;  // file path or "command line"
  int line = 0;        // 0 for command-line values
};

// Flat `key = value` configuration. Keys are case-sensitive; `-` and `_` are
// interchangeable. `#` starts a comment at line start or after whitespace.
// Later set() calls override earlier values, so flags applied after the file win.
class Config {
 public:
  static Config parse(std::istream& in, const std::string& source);
  static Config load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value,
           const std::string& source = "command line", int line = 0);
  // Applies `key=value`.
  void set_assignment(const std::string& assignment);

  bool has(const std::string& key) const;
  const ConfigEntry* find(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback, std::int64_t lo,
                       std::int64_t hi) const;
  double get_double(const std::string& key, double fallback, double lo, double hi,
                    bool open_lo = false, bool open_hi = false) const;
  std::optional<double> get_optional_double(const std::string& key, double lo, double hi,
                                            bool open_lo = false) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // Must be one of `choices`.
  std::string get_choice(const std::string& key, const std::string& fallback,
                         const std::vector<std::string>& choices) const;
  std::vector<std::string> get_list(const std::string& key) const;

  // Rejects keys outside `allowed`.
  void check_known(const std::vector<std::string>& allowed) const;

  [[noreturn]] void fail(const std::string& key, const std::string& detail) const;

  const std::map<std::string, ConfigEntry>& entries() const { return entries_; }

 private:
  std::map<std::string, ConfigEntry> entries_;
};

std::string normalize_key(std::string key);

}  // namespace shapsec
