#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace shapsec {

inline constexpr int kCsvSchemaVersion = 1;

// 12 significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double value);

using CsvCell = std::variant<std::string, double, std::int64_t, std::uint64_t>;

// Writes `# schema-version: 1`, optional `# key: value` metadata, a header
// row and data rows. Trailer comments may follow the rows.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void meta(const std::string& key, const std::string& value);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<CsvCell>& cells);
  void trailer(const std::string& key, const std::string& value);

 private:
  void ensure_preamble();

  std::ostream& out_;
  bool preamble_ = false;
  std::size_t columns_ = 0;
};

}  // namespace shapsec
