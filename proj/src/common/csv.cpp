#include "powercf/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "powercf/errors.hpp"

namespace powercf {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

CsvTable CsvTable::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw SchemaError("cannot open '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

CsvTable CsvTable::parse(std::string_view text, std::string source_name) {
  CsvTable table;
  table.source_ = std::move(source_name);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_header = false;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (!have_header) {
      table.header_ = split(line);
      for (std::size_t i = 0; i < table.header_.size(); ++i) {
        table.columns_.emplace(table.header_[i], i);
      }
      have_header = true;
      continue;
    }
    Row row{line_no, split(line)};
    if (row.fields.size() != table.header_.size()) {
      throw SchemaError(table.source_ + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(table.header_.size()) + " fields, got " +
                        std::to_string(row.fields.size()));
    }
    table.rows_.push_back(std::move(row));
  }
  if (!have_header) {
    throw SchemaError(table.source_ + ": missing header row");
  }
  return table;
}

void CsvTable::require(std::initializer_list<std::string_view> columns) const {
  std::string missing;
  for (auto c : columns) {
    if (!has(c)) {
      if (!missing.empty()) missing += ", ";
      missing += c;
    }
  }
  if (!missing.empty()) {
    throw SchemaError(source_ + ": missing required column(s): " + missing);
  }
}

bool CsvTable::has(std::string_view column) const {
  return columns_.count(std::string(column)) != 0;
}

std::size_t CsvTable::index(std::string_view column) const {
  auto it = columns_.find(std::string(column));
  if (it == columns_.end()) {
    throw SchemaError(source_ + ": missing required column(s): " + std::string(column));
  }
  return it->second;
}

const std::string& CsvTable::text(const Row& row, std::string_view column) const {
  return row.fields[index(column)];
}

double CsvTable::number(const Row& row, std::string_view column) const {
  const std::string& s = text(row, column);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
    throw SchemaError(source_ + ":" + std::to_string(row.line) + ": column '" +
                      std::string(column) + "': cannot parse number '" + s + "'");
  }
  return value;
}

int CsvTable::integer(const Row& row, std::string_view column) const {
  const std::string& s = text(row, column);
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw SchemaError(source_ + ":" + std::to_string(row.line) + ": column '" +
                      std::string(column) + "': cannot parse integer '" + s + "'");
  }
  return value;
}

}  // namespace powercf
