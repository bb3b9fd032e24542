#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace noshlab {

enum class TableFormat { Csv, Tsv, Pretty };

TableFormat parse_table_format(std::string_view text);

/// Rectangular table of text, integer and real cells. Reals are printed with
/// `significant_digits` significant digits unless `fixed_decimals` is set.
class OutputTable {
 public:
  using Cell = std::variant<std::string, std::int64_t, double>;

  explicit OutputTable(std::vector<std::string> headers) : headers_(std::move(headers)) {}

  /// Throws InputError when the row width differs from the header.
  void add_row(std::vector<Cell> row);

  void set_significant_digits(int digits) { significant_digits_ = digits; fixed_decimals_ = -1; }
  void set_fixed_decimals(int decimals) { fixed_decimals_ = decimals; }

  [[nodiscard]] const std::vector<std::string>& headers() const noexcept { return headers_; }
  [[nodiscard]] const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

  [[nodiscard]] std::string format_cell(const Cell& cell) const;
  void render(std::ostream& out, TableFormat format) const;

 private:
  std::vector<std::string> headers_;
  std::vector<std::vector<Cell>> rows_;
  int significant_digits_ = 6;
  int fixed_decimals_ = -1;
};

}  // namespace noshlab
