#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace scout {

/// Calendar date stored as days since 1970-01-01 (proleptic Gregorian).
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::int32_t days) : days_(days) {}

  static Date from_ymd(int year, unsigned month, unsigned day);
  /// Parses strictly "YYYY-MM-DD"; returns nullopt on any malformed or invalid date.
  static std::optional<Date> parse(std::string_view text);

  [[nodiscard]] constexpr std::int32_t days() const { return days_; }
  [[nodiscard]] int year() const;
  [[nodiscard]] std::string to_string() const;

  constexpr auto operator<=>(const Date&) const = default;

 private:
  std::int32_t days_ = 0;
};

inline constexpr double kDaysPerYear = 365.25;

/// Elapsed days from `from` to `to` (may be negative).
constexpr std::int32_t days_between(Date from, Date to) { return to.days() - from.days(); }

/// Whole elapsed years, floor(days / 365.25); negative spans floor toward -inf.
int elapsed_years(Date from, Date to);

}  // namespace scout
