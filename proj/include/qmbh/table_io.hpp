#pragma once

// Comma-separated tables and atomic file output.

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace qmbh::io {

/// 17 significant digits: enough for a bit-exact round trip of any double.
std::string format_double(double x);

/// Writes to a temporary sibling and renames it over `path`, so readers never
/// observe a partially written file.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

/// A table with a single header row. Cells are numbers or labels.
class Table {
 public:
  using Cell = std::variant<double, long long, std::string>;

  explicit Table(std::vector<std::string> columns);

  void add_row(std::vector<Cell> row);
  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }

  std::string to_csv() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// Parsed CSV: header plus string cells.
struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvData read_csv(const std::filesystem::path& path);

}  // namespace qmbh::io
