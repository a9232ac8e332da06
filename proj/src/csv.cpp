#include "shapsec/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace shapsec {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render(const CsvCell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) return quote(v);
        else if constexpr (std::is_same_v<T, double>) return format_number(v);
        else return std::to_string(v);
      },
      cell);
}

}  // namespace

void CsvWriter::ensure_preamble() {
  if (preamble_) return;
  out_ << "# schema-version: " << kCsvSchemaVersion << '\n';
  preamble_ = true;
}

void CsvWriter::meta(const std::string& key, const std::string& value) {
  if (columns_ != 0) throw std::logic_error("csv metadata must precede the header");
  ensure_preamble();
  out_ << "# " << key << ": " << value << '\n';
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  if (columns_ != 0) throw std::logic_error("csv header written twice");
  if (columns.empty()) throw std::invalid_argument("csv header needs at least one column");
  ensure_preamble();
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << quote(columns[i]);
  out_ << '\n';
  columns_ = columns.size();
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
  if (cells.size() != columns_) {
    throw std::logic_error("csv row has " + std::to_string(cells.size()) + " cells, header has " +
                           std::to_string(columns_));
  }
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << render(cells[i]);
  out_ << '\n';
}

void CsvWriter::trailer(const std::string& key, const std::string& value) {
  if (columns_ == 0) throw std::logic_error("csv trailer before header");
  out_ << "# " << key << ": " << value << '\n';
}

}  // namespace shapsec
