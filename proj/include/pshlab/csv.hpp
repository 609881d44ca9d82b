/// Deterministic CSV assembly: one header row, LF line ends, numbers in
/// fixed %.12e scientific form, non-finite values as the literal tokens
/// "inf", "-inf", "nan" (never as large floats). Cells must stay free of
/// delimiters, so output bytes depend only on the cell values.
#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace pshlab {

inline std::string csv_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

inline std::string csv_int(long long v) { return std::to_string(v); }

class CsvTable {
 public:
  explicit CsvTable(const std::vector<std::string>& header)
      : width_(header.size()) {
    append(header);
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != width_)
      throw std::logic_error("csv: row width does not match the header");
    append(cells);
  }

  const std::string& text() const { return buf_; }

 private:
  void append(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].find_first_of(",\"\n\r") != std::string::npos)
        throw std::logic_error("csv: cell contains a delimiter: " + cells[i]);
      if (i) buf_ += ',';
      buf_ += cells[i];
    }
    buf_ += '\n';
  }

  std::string buf_;
  std::size_t width_;
};

}  // namespace pshlab
