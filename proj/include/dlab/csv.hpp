// csv.hpp
//
// Minimal CSV reading and deterministic number formatting shared by every
// module that touches delimited text.
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dlab {

// Splits one CSV line on commas. No quoting support: none of the file formats
// handled here permit embedded commas.
std::vector<std::string> split_csv_line(std::string_view line);

// Parses a whole CSV document into rows of fields. Skips a UTF-8 BOM,
// tolerates trailing \r (CRLF input) and a trailing newline. Blank lines are
// rejected except at end of file.
struct CsvDocument {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    // Physical 1-based line number per row (header is line 1).
    std::vector<int> line_numbers;
};

CsvDocument read_csv(const std::string& path);
CsvDocument parse_csv(std::string_view text, const std::string& origin);

// Strict double parser. `context` names the file and row for error messages,
// e.g. "prices.csv row 3, column close".
double parse_double_field(std::string_view field, const std::string& context);
long long parse_ll_field(std::string_view field, const std::string& context);

// Shortest round-trip decimal representation. All numeric output funnels
// through here so repeated runs are byte-identical.
std::string format_double(double v);

} // namespace dlab
