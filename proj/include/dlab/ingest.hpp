// ingest.hpp
//
// CSV parsing/serialization for bars and macro series, and the date-aligned
// merge that produces the analysis panel.
#pragma once

#include "dlab/data.hpp"
#include "dlab/panel.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace dlab {

// Header must be exactly `date,open,high,low,close,adjusted_close,volume`.
// Rows are sorted ascending by date; duplicate dates and OHLC violations are
// rejected with the 1-based physical row number.
TickerSeries parse_ohlcv_csv(std::string_view text, std::string ticker,
                             const std::string& origin);
TickerSeries load_ohlcv_csv(const std::string& path, std::string ticker);
std::string serialize_ohlcv_csv(const TickerSeries& series);
void write_ohlcv_csv(const TickerSeries& series, const std::string& path);

// Header must be `date,value`; `name` must be a recognized macro series.
MacroSeries parse_macro_csv(const std::string& name, std::string_view text,
                            const std::string& origin);
MacroSeries load_macro_csv(const std::string& name, const std::string& path);
std::string serialize_macro_csv(const MacroSeries& series);

// Inner-joins ticker series on their common trading dates and forward-fills
// each macro series onto that axis. Columns are ordered canonically: tickers
// alphabetically with fields open, high, low, close, adjusted_close, volume,
// then macro series alphabetically, so the merge is input-order independent.
AlignedPanel align_and_merge(const std::vector<TickerSeries>& tickers,
                             const std::vector<MacroSeries>& macros);

// Truncates the panel to the span where every listed ticker has data (first
// to last date with any defined value in its columns), then optionally to the
// trailing `trailing_years` years (0 disables the year cut).
AlignedPanel restrict_common_range(const AlignedPanel& panel,
                                   const std::vector<std::string>& tickers,
                                   int trailing_years = 40);

} // namespace dlab
