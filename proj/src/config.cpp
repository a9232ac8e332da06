#include "shapsec/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace shapsec {

namespace {

std::string location(const std::string& source, int line) {
  if (source.empty()) return {};
  return line > 0 ? source + ":" + std::to_string(line) + ": " : source + ": ";
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '#' && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
      return line.substr(0, i);
    }
  }
  return line;
}

}  // namespace

ConfigError::ConfigError(const std::string& field, const std::string& detail,
                         const std::string& source, int line)
    : std::runtime_error(location(source, line) +
                         (field.empty() ? detail : "field `" + field + "`: " + detail)),
      field_(field),
      line_(line) {}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

Config Config::parse(std::istream& in, const std::string& source) {
  Config config;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", "expected `key = value`, got `" + line + "`", source, lineno);
    }
    const std::string key = normalize_key(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("", "missing key before `=`", source, lineno);
    if (config.has(key)) {
      const auto* prev = config.find(key);
      throw ConfigError(key, "duplicate key (first set on line " + std::to_string(prev->line) + ")",
                        source, lineno);
    }
    config.set(key, value, source, lineno);
  }
  return config;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file", path.string());
  return parse(in, path.string());
}

void Config::set(const std::string& key, const std::string& value, const std::string& source,
                 int line) {
  entries_[normalize_key(key)] = ConfigEntry{value, source, line};
}

void Config::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("", "expected key=value, got `" + assignment + "`", "command line");
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

bool Config::has(const std::string& key) const { return entries_.count(normalize_key(key)) > 0; }

const ConfigEntry* Config::find(const std::string& key) const {
  auto it = entries_.find(normalize_key(key));
  return it == entries_.end() ? nullptr : &it->second;
}

void Config::fail(const std::string& key, const std::string& detail) const {
  const auto* e = find(key);
  if (!e) throw ConfigError(normalize_key(key), detail);
  throw ConfigError(normalize_key(key), detail, e->source, e->line);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto* e = find(key);
  return e ? e->value : fallback;
}

std::string Config::require_string(const std::string& key) const {
  const auto* e = find(key);
  if (!e) throw ConfigError(normalize_key(key), "required field is missing");
  if (e->value.empty()) fail(key, "must not be empty");
  return e->value;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback, std::int64_t lo,
                             std::int64_t hi) const {
  const auto* e = find(key);
  if (!e) return fallback;
  std::int64_t v = 0;
  try {
    std::size_t used = 0;
    v = std::stoll(e->value, &used);
    if (used != e->value.size()) throw std::invalid_argument(e->value);
  } catch (const std::exception&) {
    fail(key, "expected an integer, got `" + e->value + "`");
  }
  if (v < lo || v > hi) {
    fail(key, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                  std::to_string(hi) + "]");
  }
  return v;
}

std::optional<double> Config::get_optional_double(const std::string& key, double lo, double hi,
                                                  bool open_lo) const {
  if (!has(key)) return std::nullopt;
  return get_double(key, 0.0, lo, hi, open_lo);
}

double Config::get_double(const std::string& key, double fallback, double lo, double hi,
                          bool open_lo, bool open_hi) const {
  const auto* e = find(key);
  if (!e) return fallback;
  double v = 0.0;
  try {
    std::size_t used = 0;
    v = std::stod(e->value, &used);
    if (used != e->value.size()) throw std::invalid_argument(e->value);
  } catch (const std::exception&) {
    fail(key, "expected a number, got `" + e->value + "`");
  }
  const bool below = open_lo ? !(v > lo) : !(v >= lo);
  const bool above = open_hi ? !(v < hi) : !(v <= hi);
  if (!std::isfinite(v) || below || above) {
    std::ostringstream range;
    range << (open_lo ? "(" : "[") << lo << ", " << hi << (open_hi ? ")" : "]");
    fail(key, "value `" + e->value + "` outside " + range.str());
  }
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto* e = find(key);
  if (!e) return fallback;
  if (e->value == "1" || e->value == "true" || e->value == "yes" || e->value == "on") return true;
  if (e->value == "0" || e->value == "false" || e->value == "no" || e->value == "off") return false;
  fail(key, "expected a boolean, got `" + e->value + "`");
}

std::string Config::get_choice(const std::string& key, const std::string& fallback,
                               const std::vector<std::string>& choices) const {
  const std::string v = get_string(key, fallback);
  if (std::find(choices.begin(), choices.end(), v) != choices.end()) return v;
  std::string all;
  for (const auto& c : choices) all += (all.empty() ? "" : " | ") + c;
  fail(key, "expected one of " + all + ", got `" + v + "`");
}

std::vector<std::string> Config::get_list(const std::string& key) const {
  std::vector<std::string> out;
  const auto* e = find(key);
  if (!e) return out;
  std::istringstream in(e->value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(key, "empty list item");
    out.push_back(item);
  }
  return out;
}

void Config::check_known(const std::vector<std::string>& allowed) const {
  for (const auto& [key, entry] : entries_) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(key, "unknown field for this command", entry.source, entry.line);
    }
  }
}

}  // namespace shapsec
