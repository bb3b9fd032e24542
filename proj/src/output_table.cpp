#include "noshlab/output_table.hpp"

#include "noshlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace noshlab {

TableFormat parse_table_format(std::string_view text) {
  if (text == "csv") return TableFormat::Csv;
  if (text == "tsv") return TableFormat::Tsv;
  if (text == "pretty") return TableFormat::Pretty;
  throw InputError("unknown table format '" + std::string(text) + "' (expected csv, tsv or pretty)");
}

void OutputTable::add_row(std::vector<Cell> row) {
  if (row.size() != headers_.size()) {
    throw InputError("table row has " + std::to_string(row.size()) + " cells, expected " +
                     std::to_string(headers_.size()));
  }
  rows_.push_back(std::move(row));
}

std::string OutputTable::format_cell(const Cell& cell) const {
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  double v = std::get<double>(cell);
  if (std::isnan(v)) return "NA";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  if (fixed_decimals_ >= 0) {
    std::snprintf(buf, sizeof(buf), "%.*f", fixed_decimals_, v);
    // A value that rounds to zero prints without a sign.
    std::string out(buf);
    if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
    return out;
  }
  std::snprintf(buf, sizeof(buf), "%.*g", significant_digits_, v);
  return buf;
}

void OutputTable::render(std::ostream& out, TableFormat format) const {
  std::vector<std::vector<std::string>> text;
  text.push_back(headers_);
  for (const auto& row : rows_) {
    std::vector<std::string> line;
    for (const auto& cell : row) line.push_back(format_cell(cell));
    text.push_back(std::move(line));
  }

  if (format != TableFormat::Pretty) {
    const char sep = format == TableFormat::Csv ? ',' : '\t';
    for (const auto& line : text) {
      for (std::size_t j = 0; j < line.size(); ++j) out << (j ? std::string(1, sep) : "") << line[j];
      out << '\n';
    }
    return;
  }

  std::vector<std::size_t> width(headers_.size(), 0);
  for (const auto& line : text) {
    for (std::size_t j = 0; j < line.size(); ++j) width[j] = std::max(width[j], line[j].size());
  }
  for (const auto& line : text) {
    for (std::size_t j = 0; j < line.size(); ++j) {
      if (j) out << "  ";
      out << line[j];
      if (j + 1 < line.size()) out << std::string(width[j] - line[j].size(), ' ');
    }
    out << '\n';
  }
}

}  // namespace noshlab
