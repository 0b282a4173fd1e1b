#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace powercf {

/// Minimal reader for the comma-separated files this project consumes:
/// a header row, no quoting, surrounding whitespace trimmed.
class CsvTable {
 public:
  struct Row {
    std::size_t line = 0;  // 1-based line number in the source file
    std::vector<std::string> fields;
  };

  static CsvTable read(const std::filesystem::path& path);
  static CsvTable parse(std::string_view text, std::string source_name);

  /// Throws SchemaError naming every missing column.
  void require(std::initializer_list<std::string_view> columns) const;
  bool has(std::string_view column) const;
  std::size_t index(std::string_view column) const;

  const std::vector<Row>& rows() const { return rows_; }
  const std::string& source() const { return source_; }

  const std::string& text(const Row& row, std::string_view column) const;
  /// Parsed double; throws SchemaError carrying the line number.
  double number(const Row& row, std::string_view column) const;
  int integer(const Row& row, std::string_view column) const;

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::unordered_map<std::string, std::size_t> columns_;
  std::vector<Row> rows_;
};

}  // namespace powercf
