#include "dlab/csv.hpp"
#include "dlab/dates.hpp"
#include "dlab/errors.hpp"
#include "dlab/numerics.hpp"

#include <doctest.h>

#include <charconv>
#include <cmath>
#include <string>

using namespace dlab;

TEST_CASE("date parse and round trip") {
    const Date d = Date::parse("2020-02-29");
    CHECK(d.year() == 2020);
    CHECK(d.month() == 2);
    CHECK(d.day() == 29);
    CHECK(d.to_string() == "2020-02-29");
    CHECK(Date::parse("1970-01-01").serial == 0);
    CHECK(Date::parse("1970-01-02").serial == 1);
}

TEST_CASE("date parse rejects malformed input") {
    CHECK_THROWS_AS(Date::parse("2021-02-29"), ParseError); // not a leap year
    CHECK_THROWS_AS(Date::parse("2020-13-01"), ParseError);
    CHECK_THROWS_AS(Date::parse("2020-00-10"), ParseError);
    CHECK_THROWS_AS(Date::parse("2020-1-01"), ParseError);
    CHECK_THROWS_AS(Date::parse("2020-01-1"), ParseError);
    CHECK_THROWS_AS(Date::parse("2020/01/01"), ParseError);
    CHECK_THROWS_AS(Date::parse("2020-01-011"), ParseError);
    CHECK_THROWS_AS(Date::parse(""), ParseError);
    CHECK_THROWS_AS(Date::parse("20-01-01xx"), ParseError);
}

TEST_CASE("date ordering and day arithmetic") {
    CHECK(Date::parse("2019-12-31") < Date::parse("2020-01-01"));
    CHECK(Date::parse("2020-03-01").serial - Date::parse("2020-02-28").serial ==
          2);
    // serial axis is contiguous across month and year boundaries
    CHECK(Date::parse("2021-01-01").serial -
              Date::parse("2020-12-31").serial ==
          1);
}

TEST_CASE("add_years clamps leap days") {
    const Date leap = Date::parse("2020-02-29");
    CHECK(add_years(leap, 1).to_string() == "2021-02-28");
    CHECK(add_years(leap, 4).to_string() == "2024-02-29");
    CHECK(add_years(Date::parse("2018-06-15"), -40).to_string() ==
          "1978-06-15");
}

TEST_CASE("csv line splitting") {
    CHECK(split_csv_line("a,b,c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(split_csv_line("a,,c") == std::vector<std::string>{"a", "", "c"});
    CHECK(split_csv_line("") == std::vector<std::string>{""});
    CHECK(split_csv_line("a,") == std::vector<std::string>{"a", ""});
}

TEST_CASE("csv document parsing") {
    const CsvDocument doc = parse_csv("h1,h2\r\n1,2\n3,4\n", "mem");
    CHECK(doc.header == std::vector<std::string>{"h1", "h2"});
    REQUIRE(doc.rows.size() == 2);
    CHECK(doc.rows[0] == std::vector<std::string>{"1", "2"});
    CHECK(doc.line_numbers[0] == 2); // physical line, header is line 1
    CHECK(doc.line_numbers[1] == 3);
}

TEST_CASE("csv parsing skips a BOM and rejects interior blank lines") {
    const CsvDocument doc = parse_csv("\xEF\xBB\xBFh\n1\n", "mem");
    CHECK(doc.header == std::vector<std::string>{"h"});
    CHECK_THROWS_AS(parse_csv("h\n1\n\n2\n", "mem"), ParseError);
    CHECK_NOTHROW(parse_csv("h\n1\n", "mem"));  // trailing newline is fine
    CHECK_NOTHROW(parse_csv("h\n1", "mem"));    // missing one too
    CHECK_THROWS_AS(parse_csv("", "mem"), ParseError);
}

TEST_CASE("numeric fields parse strictly") {
    CHECK(parse_double_field("1.5", "ctx") == 1.5);
    CHECK(parse_double_field("-2e3", "ctx") == -2000.0);
    CHECK(parse_double_field("100", "ctx") == 100.0);
    CHECK_THROWS_AS(parse_double_field("", "ctx"), ParseError);
    CHECK_THROWS_AS(parse_double_field("1.5x", "ctx"), ParseError);
    CHECK_THROWS_AS(parse_double_field(" 1.5", "ctx"), ParseError);
    CHECK_THROWS_AS(parse_double_field("nan", "ctx"), ParseError);
    CHECK_THROWS_AS(parse_double_field("inf", "ctx"), ParseError);
    CHECK(parse_ll_field("12345", "ctx") == 12345);
    CHECK_THROWS_AS(parse_ll_field("1.5", "ctx"), ParseError);
}

TEST_CASE("double formatting is shortest-round-trip") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(0.11) == "0.11");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-0.0) == "0"); // negative zero normalized
    CHECK(format_double(1e21) == "1e+21");
}

TEST_CASE("double formatting round-trips exactly") {
    SeededRng rng(911);
    for (int i = 0; i < 1000; ++i) {
        double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform_int(12));
        const std::string s = format_double(v);
        double back = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), back);
        REQUIRE(res.ec == std::errc());
        CHECK(back == v);
    }
}
