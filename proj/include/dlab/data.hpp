// data.hpp
//
// Core market data records: daily bars, per-ticker series, macro series, and
// the fundamentals snapshot used for valuation ratios.
#pragma once

#include "dlab/dates.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace dlab {

// Undefined values (indicator warm-up, division guards) travel as quiet NaN.
inline double undefined_value() { return std::nan(""); }
inline bool is_defined(double v) { return !std::isnan(v); }

struct Bar {
    Date date;
    double open = 0;
    double high = 0;
    double low = 0;
    double close = 0;
    double adjusted_close = 0;
    double volume = 0;
};

struct TickerSeries {
    std::string ticker;
    std::vector<Bar> bars;

    std::vector<double> closes() const;
    std::vector<double> adjusted_closes() const;
    std::vector<double> volumes() const;
    std::vector<Date> dates() const;
};

struct MacroObservation {
    Date date;
    double value = 0;
};

struct MacroSeries {
    std::string name;
    std::vector<MacroObservation> observations;
};

struct FundamentalsRecord {
    Date date;
    double eps = 0;
    double dividends_per_share = 0;
    double book_value_per_share = 0;
    double net_income = 0;
    double earnings_growth_rate = 0;
};

// Recognized macro series identifiers.
const std::vector<std::string>& macro_series_names();
bool is_macro_series_name(const std::string& name);

// Throws ValidationError on any violated invariant. `origin` and `row`
// identify the offending input location in the message.
void validate_bar(const Bar& bar, const std::string& origin, int row);
void validate_ticker_series(const TickerSeries& series,
                            const std::string& origin);
void validate_macro_series(const MacroSeries& series,
                           const std::string& origin);

} // namespace dlab
