#include "powercf/calendar.hpp"

#include <charconv>
#include <cstdio>

#include "powercf/errors.hpp"

namespace powercf {
namespace {

int parse_int(std::string_view text, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw SchemaError("invalid date '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

std::string YearMonth::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
  return buf;
}

YearMonth YearMonth::parse(std::string_view text) {
  if (text.size() < 7 || text[4] != '-') {
    throw SchemaError("invalid year-month '" + std::string(text) + "'");
  }
  const int y = parse_int(text.substr(0, 4), text);
  const int m = parse_int(text.substr(5, 2), text);
  if (m < 1 || m > 12) {
    throw SchemaError("invalid month in '" + std::string(text) + "'");
  }
  return {y, m};
}

Date parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw SchemaError("invalid date '" + std::string(text) + "' (want YYYY-MM-DD)");
  }
  const int y = parse_int(text.substr(0, 4), text);
  const unsigned m = unsigned(parse_int(text.substr(5, 2), text));
  const unsigned d = unsigned(parse_int(text.substr(8, 2), text));
  Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) {
    throw SchemaError("invalid date '" + std::string(text) + "'");
  }
  return date;
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(d.year()), unsigned(d.month()),
                unsigned(d.day()));
  return buf;
}

}  // namespace powercf
