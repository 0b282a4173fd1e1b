#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace powercf {

/// A calendar month. Ordinal arithmetic is in whole months.
struct YearMonth {
  int year = 1970;
  int month = 1;  // 1..12

  constexpr YearMonth() = default;
  constexpr YearMonth(int y, int m) : year(y), month(m) {}

  /// Months since year 0, used for ordering and differences.
  constexpr int ordinal() const { return year * 12 + (month - 1); }
  static constexpr YearMonth from_ordinal(int ord) {
    return {ord / 12, ord % 12 + 1};
  }

  constexpr YearMonth operator+(int months) const {
    return from_ordinal(ordinal() + months);
  }
  constexpr YearMonth& operator++() { return *this = *this + 1; }
  friend constexpr int operator-(YearMonth a, YearMonth b) {
    return a.ordinal() - b.ordinal();
  }
  friend constexpr auto operator<=>(YearMonth a, YearMonth b) {
    return a.ordinal() <=> b.ordinal();
  }
  friend constexpr bool operator==(YearMonth a, YearMonth b) = default;

  int days() const;
  /// "YYYY-MM"
  std::string str() const;
  /// Accepts "YYYY-MM" (and "YYYY-MM-DD", day ignored). Throws SchemaError.
  static YearMonth parse(std::string_view text);
};

/// Inclusive range of months.
struct MonthRange {
  YearMonth first;
  YearMonth last;

  int size() const { return last - first + 1; }
  bool contains(YearMonth m) const { return first <= m && m <= last; }
  bool contains(const MonthRange& other) const {
    return contains(other.first) && contains(other.last);
  }
  friend bool operator==(const MonthRange&, const MonthRange&) = default;
};

using Date = std::chrono::year_month_day;

/// Parses "YYYY-MM-DD". Throws SchemaError.
Date parse_date(std::string_view text);
std::string format_date(const Date& d);

inline YearMonth year_month_of(const Date& d) {
  return {int(d.year()), int(unsigned(d.month()))};
}

inline int days_in_year_month(int year, int month) {
  using namespace std::chrono;
  return int(unsigned(
      year_month_day_last{std::chrono::year{year} / std::chrono::month{unsigned(month)} / last}.day()));
}

inline int YearMonth::days() const { return days_in_year_month(year, month); }

}  // namespace powercf
