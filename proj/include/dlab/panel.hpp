// panel.hpp
//
// The date-aligned feature table shared by every analysis stage. Per-ticker
// columns are named `{ticker}.{feature}`; macro columns carry the bare series
// name (tickers therefore must not contain '.').
#pragma once

#include "dlab/dates.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dlab {

struct ColumnInfo {
    std::string ticker;  // empty for macro columns
    std::string feature; // indicator/field name, or the macro series name
    bool macro = false;  // true when the column came from a forward-filled
                         // lower-frequency series
};

ColumnInfo parse_column_name(std::string_view name);
std::string make_column_name(std::string_view ticker, std::string_view feature);

struct AlignedPanel {
    std::vector<Date> dates;
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    std::size_t n_rows() const { return dates.size(); }
    std::size_t n_cols() const { return names.size(); }

    bool has_column(std::string_view name) const;
    std::size_t column_index(std::string_view name) const;
    const std::vector<double>& column(std::string_view name) const;
    void add_column(std::string name, std::vector<double> values);

    // Column names carrying the given ticker prefix.
    std::vector<std::string> ticker_columns(std::string_view ticker) const;
    std::vector<std::string> tickers() const;
};

// Panel CSV: header `date,<col>,...`; undefined cells are empty fields.
std::string serialize_panel_csv(const AlignedPanel& panel);
AlignedPanel parse_panel_csv(std::string_view text, const std::string& origin);
AlignedPanel load_panel_csv(const std::string& path);
void write_panel_csv(const AlignedPanel& panel, const std::string& path);

} // namespace dlab
