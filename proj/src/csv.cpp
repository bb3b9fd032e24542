#include "noshlab/csv.hpp"

#include "noshlab/errors.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace noshlab::csv {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

numkit::Dataset read_dataset(std::istream& in, const std::string& source) {
  std::string line;
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto cells = split(view);

    if (header.empty()) {
      for (auto cell : cells) {
        if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') cell = cell.substr(1, cell.size() - 2);
        if (cell.empty()) throw InputError(source + ": empty column name in header");
        header.emplace_back(cell);
      }
      columns.resize(header.size());
      continue;
    }

    if (cells.size() != header.size()) {
      throw InputError(source + ":" + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                       " cells, found " + std::to_string(cells.size()));
    }
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const std::string_view cell = cells[j];
      if (cell.empty()) {
        throw InputError(source + ":" + std::to_string(line_no) + ": blank cell in column '" + header[j] + "'");
      }
      const char* begin = cell.data();
      const char* end = cell.data() + cell.size();
      if (*begin == '+') ++begin;
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(begin, end, value);
      if (ec != std::errc() || ptr != end) {
        throw InputError(source + ":" + std::to_string(line_no) + ": '" + std::string(cell) + "' in column '" +
                         header[j] + "' is not a number");
      }
      columns[j].push_back(value);
    }
  }
  if (header.empty()) throw InputError(source + ": missing header row");

  numkit::Dataset data;
  for (std::size_t j = 0; j < header.size(); ++j) {
    try {
      data.add_column(header[j], std::move(columns[j]));
    } catch (const InputError& e) {
      throw InputError(source + ": " + e.what());
    }
  }
  return data;
}

numkit::Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return read_dataset(in, path.string());
}

std::string format_exact(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_dataset(std::ostream& out, const numkit::Dataset& data) {
  const auto& names = data.names();
  for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
  out << '\n';
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < data.cols(); ++j) out << (j ? "," : "") << format_exact(data.column_at(j)[i]);
    out << '\n';
  }
}

void write_dataset(const std::filesystem::path& path, const numkit::Dataset& data) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  write_dataset(out, data);
}

}  // namespace noshlab::csv
