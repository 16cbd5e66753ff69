#include "dlab/csv.hpp"

#include "dlab/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dlab {

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            break;
        }
        fields.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

CsvDocument parse_csv(std::string_view text, const std::string& origin) {
    if (text.size() >= 3 && text.substr(0, 3) == "\xef\xbb\xbf")
        text.remove_prefix(3);

    CsvDocument doc;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        if (pos == text.size()) break;
        std::size_t eol = text.find('\n', pos);
        std::string_view line = (eol == std::string_view::npos)
                                    ? text.substr(pos)
                                    : text.substr(pos, eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() : eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        if (line.empty()) {
            if (pos >= text.size()) break;
            throw ParseError(origin + " line " + std::to_string(line_no) +
                             ": blank line");
        }
        if (line_no == 1)
            doc.header = split_csv_line(line);
        else {
            doc.rows.push_back(split_csv_line(line));
            doc.line_numbers.push_back(line_no);
        }
    }
    if (doc.header.empty())
        throw ParseError(origin + ": empty file, expected a header row");
    return doc;
}

CsvDocument read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), path);
}

double parse_double_field(std::string_view field, const std::string& context) {
    double value = 0.0;
    auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(context + ": cannot parse number from '" +
                         std::string(field) + "'");
    if (!std::isfinite(value))
        throw ParseError(context + ": non-finite number '" +
                         std::string(field) + "'");
    return value;
}

long long parse_ll_field(std::string_view field, const std::string& context) {
    long long value = 0;
    auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(context + ": cannot parse integer from '" +
                         std::string(field) + "'");
    return value;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (v == 0.0) v = 0.0;
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace dlab
