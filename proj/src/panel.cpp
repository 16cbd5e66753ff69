#include "dlab/panel.hpp"

#include "dlab/csv.hpp"
#include "dlab/data.hpp"
#include "dlab/errors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace dlab {

ColumnInfo parse_column_name(std::string_view name) {
    ColumnInfo info;
    const std::size_t dot = name.find('.');
    if (dot == std::string_view::npos) {
        info.feature = std::string(name);
        info.macro = true;
    } else {
        info.ticker = std::string(name.substr(0, dot));
        info.feature = std::string(name.substr(dot + 1));
    }
    return info;
}

std::string make_column_name(std::string_view ticker,
                             std::string_view feature) {
    return std::string(ticker) + "." + std::string(feature);
}

bool AlignedPanel::has_column(std::string_view name) const {
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::size_t AlignedPanel::column_index(std::string_view name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end())
        throw ValidationError("panel has no column '" + std::string(name) +
                              "'");
    return static_cast<std::size_t>(it - names.begin());
}

const std::vector<double>& AlignedPanel::column(std::string_view name) const {
    return columns[column_index(name)];
}

void AlignedPanel::add_column(std::string name, std::vector<double> values) {
    if (values.size() != dates.size())
        throw ValidationError("column '" + name + "' has length " +
                              std::to_string(values.size()) +
                              ", panel has " + std::to_string(dates.size()) +
                              " rows");
    if (has_column(name))
        throw ValidationError("panel already has column '" + name + "'");
    names.push_back(std::move(name));
    columns.push_back(std::move(values));
}

std::vector<std::string>
AlignedPanel::ticker_columns(std::string_view ticker) const {
    std::vector<std::string> out;
    for (const auto& name : names)
        if (parse_column_name(name).ticker == ticker) out.push_back(name);
    return out;
}

std::vector<std::string> AlignedPanel::tickers() const {
    std::vector<std::string> out;
    for (const auto& name : names) {
        const ColumnInfo info = parse_column_name(name);
        if (!info.ticker.empty() &&
            std::find(out.begin(), out.end(), info.ticker) == out.end())
            out.push_back(info.ticker);
    }
    return out;
}

std::string serialize_panel_csv(const AlignedPanel& panel) {
    std::string out = "date";
    for (const auto& name : panel.names) {
        out += ',';
        out += name;
    }
    out += '\n';
    for (std::size_t r = 0; r < panel.n_rows(); ++r) {
        out += panel.dates[r].to_string();
        for (std::size_t c = 0; c < panel.n_cols(); ++c) {
            out += ',';
            const double v = panel.columns[c][r];
            if (is_defined(v)) out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

AlignedPanel parse_panel_csv(std::string_view text, const std::string& origin) {
    const CsvDocument doc = parse_csv(text, origin);
    if (doc.header.empty() || doc.header[0] != "date")
        throw ParseError(origin + ": first panel column must be 'date'");
    AlignedPanel panel;
    panel.names.assign(doc.header.begin() + 1, doc.header.end());
    panel.columns.assign(panel.names.size(), {});
    for (std::size_t r = 0; r < doc.rows.size(); ++r) {
        const auto& row = doc.rows[r];
        const std::string ctx =
            origin + " row " + std::to_string(doc.line_numbers[r]);
        if (row.size() != doc.header.size())
            throw ParseError(ctx + ": expected " +
                             std::to_string(doc.header.size()) +
                             " fields, got " + std::to_string(row.size()));
        panel.dates.push_back(Date::parse(row[0]));
        for (std::size_t c = 0; c < panel.names.size(); ++c) {
            const auto& field = row[c + 1];
            panel.columns[c].push_back(
                field.empty()
                    ? undefined_value()
                    : parse_double_field(field, ctx + ", column " +
                                                    panel.names[c]));
        }
    }
    for (std::size_t r = 1; r < panel.dates.size(); ++r)
        if (!(panel.dates[r - 1] < panel.dates[r]))
            throw ValidationError(origin + ": dates not strictly increasing at " +
                                  panel.dates[r].to_string());
    return panel;
}

AlignedPanel load_panel_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_panel_csv(buf.str(), path);
}

void write_panel_csv(const AlignedPanel& panel, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(path + ": cannot open file for writing");
    out << serialize_panel_csv(panel);
}

} // namespace dlab
