// dates.hpp
// Calendar dates as day counts since 1970-01-01 (proleptic Gregorian).
// Conversion uses the civil-from-days / days-from-civil algorithms, so no
// timezone or libc dependency is involved.

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace dlab {

struct Date {
    std::int32_t serial = 0; // days since 1970-01-01

    static Date from_ymd(int year, int month, int day);
    // Parses strict ISO-8601 YYYY-MM-DD; throws ParseError otherwise.
    static Date parse(std::string_view iso);

    std::string to_string() const; // YYYY-MM-DD

    int year() const;
    int month() const;
    int day() const;

    auto operator<=>(const Date&) const = default;
};

// Same month/day `years` earlier/later; Feb 29 clamps to Feb 28.
Date add_years(Date d, int years);

bool is_valid_ymd(int year, int month, int day);

} // namespace dlab
