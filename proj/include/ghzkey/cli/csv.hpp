#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace ghzkey::cli {

using Cell = std::variant<std::monostate, double, long long, std::string, bool>;

/// Header lines, column names and rows of one output file.
struct ResultTable {
  std::vector<std::string> metadata;  // written as "# <line>"
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

std::string format_cell(const Cell& c);
/// RFC-4180 quoting when the field contains a comma, quote or newline.
std::string csv_escape(const std::string& s);
void write_csv(std::ostream& out, const ResultTable& table);
void write_csv_file(const std::string& path, const ResultTable& table);

}  // namespace ghzkey::cli
