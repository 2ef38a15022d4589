#pragma once

#include <string>
#include <variant>
#include <vector>

namespace focklab {

// Comma-separated table: header row, LF endings, doubles as %.16e
// (17 significant digits). Text cells must not contain commas or newlines.
class CsvTable {
 public:
  using Cell = std::variant<double, long long, std::string>;

  explicit CsvTable(std::vector<std::string> header);

  void add(std::vector<Cell> row);
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& header() const { return header_; }
  std::string render() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

std::string format_cell(double v);

// Writes to path.tmp and renames over path.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace focklab
