#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace evolab {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a named column; throws if absent.
  std::size_t column(const std::string& name) const;
};

// Plain comma-separated values, no quoting (cells here are identifiers and
// numbers). Rows must all match the header width.
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace evolab
