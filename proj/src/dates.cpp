#include "dlab/dates.hpp"

#include "dlab/errors.hpp"

#include <array>
#include <charconv>

namespace dlab {

namespace {

// Howard Hinnant's civil calendar algorithms.
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct Civil {
    int y;
    unsigned m;
    unsigned d;
};

Civil civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {static_cast<int>(y + (m <= 2)), m, d};
}

bool is_leap(int y) {
    return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0);
}

int days_in_month(int y, int m) {
    static constexpr std::array<int, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                    31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return lengths[static_cast<std::size_t>(m - 1)];
}

int parse_int_field(std::string_view s, std::string_view what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("invalid " + std::string(what) + " in date field '" +
                         std::string(s) + "'");
    return value;
}

} // namespace

bool is_valid_ymd(int year, int month, int day) {
    return month >= 1 && month <= 12 && day >= 1 &&
           day <= days_in_month(year, month);
}

Date Date::from_ymd(int year, int month, int day) {
    if (!is_valid_ymd(year, month, day))
        throw ParseError("invalid calendar date " + std::to_string(year) + "-" +
                         std::to_string(month) + "-" + std::to_string(day));
    return Date{static_cast<std::int32_t>(
        days_from_civil(year, static_cast<unsigned>(month),
                        static_cast<unsigned>(day)))};
}

Date Date::parse(std::string_view iso) {
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-')
        throw ParseError("expected ISO date YYYY-MM-DD, got '" +
                         std::string(iso) + "'");
    const int y = parse_int_field(iso.substr(0, 4), "year");
    const int m = parse_int_field(iso.substr(5, 2), "month");
    const int d = parse_int_field(iso.substr(8, 2), "day");
    return from_ymd(y, m, d);
}

std::string Date::to_string() const {
    const Civil c = civil_from_days(serial);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", c.y, c.m, c.d);
    return std::string(buf);
}

int Date::year() const { return civil_from_days(serial).y; }
int Date::month() const { return static_cast<int>(civil_from_days(serial).m); }
int Date::day() const { return static_cast<int>(civil_from_days(serial).d); }

Date add_years(Date d, int years) {
    const Civil c = civil_from_days(d.serial);
    const int y = c.y + years;
    int day = static_cast<int>(c.d);
    const int m = static_cast<int>(c.m);
    if (day > days_in_month(y, m)) day = days_in_month(y, m);
    return Date::from_ymd(y, m, day);
}

} // namespace dlab
