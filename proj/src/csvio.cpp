#include "evolab/csvio.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace evolab {

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf, ptr);
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw std::invalid_argument("csv: no column named '" + name + "'");
}

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

void write_row(std::ofstream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

}  // namespace

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("csv: cannot open " + path.string() + " for writing");
  write_row(out, table.header);
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw std::invalid_argument("csv: row width " + std::to_string(row.size()) +
                                  " does not match header width " +
                                  std::to_string(table.header.size()));
    write_row(out, row);
  }
  if (!out) throw std::runtime_error("csv: write failed for " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open " + path.string() + " for reading");
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.eof()) break;
    if (first) {
      table.header = split_row(line);
      first = false;
    } else {
      auto cells = split_row(line);
      if (cells.size() != table.header.size())
        throw std::runtime_error("csv: " + path.string() + " row " +
                                 std::to_string(table.rows.size() + 2) + " has " +
                                 std::to_string(cells.size()) + " cells, expected " +
                                 std::to_string(table.header.size()));
      table.rows.push_back(std::move(cells));
    }
  }
  if (first) throw std::runtime_error("csv: " + path.string() + " is empty");
  return table;
}

}  // namespace evolab
