#include "focklab/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "focklab/error.hpp"

namespace focklab {

namespace {

void check_text(const std::string& s) {
  if (s.find_first_of(",\n\r") != std::string::npos)
    throw Error(ErrorCode::invalid_argument, "CSV text cell contains a separator: '" + s + "'");
}

}  // namespace

std::string format_cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  for (const auto& h : header_) check_text(h);
}

void CsvTable::add(std::vector<Cell> row) {
  if (row.size() != header_.size())
    throw Error(ErrorCode::invalid_argument, "CSV row has " + std::to_string(row.size()) + " cells, header has " +
                                                 std::to_string(header_.size()));
  for (const auto& c : row)
    if (const auto* s = std::get_if<std::string>(&c)) check_text(*s);
  rows_.push_back(std::move(row));
}

std::string CsvTable::render() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) out += (i ? "," : "") + header_[i];
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) out += format_cell(v);
            else if constexpr (std::is_same_v<T, long long>) out += std::to_string(v);
            else out += v;
          },
          row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot open " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::io, "write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::io, "rename to " + path + " failed: " + ec.message());
}

}  // namespace focklab
