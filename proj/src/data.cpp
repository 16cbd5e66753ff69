#include "dlab/data.hpp"

#include "dlab/errors.hpp"

#include <algorithm>

namespace dlab {

namespace {

template <typename F>
std::vector<double> extract(const std::vector<Bar>& bars, F field) {
    std::vector<double> out;
    out.reserve(bars.size());
    for (const Bar& b : bars) out.push_back(field(b));
    return out;
}

} // namespace

std::vector<double> TickerSeries::closes() const {
    return extract(bars, [](const Bar& b) { return b.close; });
}

std::vector<double> TickerSeries::adjusted_closes() const {
    return extract(bars, [](const Bar& b) { return b.adjusted_close; });
}

std::vector<double> TickerSeries::volumes() const {
    return extract(bars, [](const Bar& b) { return b.volume; });
}

std::vector<Date> TickerSeries::dates() const {
    std::vector<Date> out;
    out.reserve(bars.size());
    for (const Bar& b : bars) out.push_back(b.date);
    return out;
}

const std::vector<std::string>& macro_series_names() {
    static const std::vector<std::string> names = {
        "consumer_sentiment", "cpi",       "durable_goods", "fed_funds",
        "gdp",                "inflation", "retail_sales",  "yield_10y",
        "yield_5y",           "yield_30y", "unemployment",  "market_value"};
    return names;
}

bool is_macro_series_name(const std::string& name) {
    const auto& names = macro_series_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

void validate_bar(const Bar& bar, const std::string& origin, int row) {
    const std::string at = origin + " at row " + std::to_string(row);
    if (bar.volume < 0) throw ValidationError("volume negative " + at);
    for (double p : {bar.open, bar.high, bar.low, bar.close,
                     bar.adjusted_close}) {
        if (!(p > 0)) throw ValidationError("non-positive price " + at);
    }
    if (bar.low > std::min(bar.open, bar.close))
        throw ValidationError("low above open/close " + at);
    if (bar.high < std::max(bar.open, bar.close))
        throw ValidationError("high below open/close " + at);
}

void validate_ticker_series(const TickerSeries& series,
                            const std::string& origin) {
    if (series.ticker.find('.') != std::string::npos)
        throw ValidationError(origin + ": ticker symbol '" + series.ticker +
                              "' must not contain '.'");
    for (std::size_t i = 1; i < series.bars.size(); ++i) {
        if (!(series.bars[i - 1].date < series.bars[i].date))
            throw ValidationError(origin + ": duplicate date " +
                                  series.bars[i].date.to_string());
    }
}

void validate_macro_series(const MacroSeries& series,
                           const std::string& origin) {
    if (!is_macro_series_name(series.name))
        throw ValidationError(origin + ": unknown macro series name '" +
                              series.name + "'");
    for (std::size_t i = 0; i < series.observations.size(); ++i) {
        if (!std::isfinite(series.observations[i].value))
            throw ValidationError(
                origin + ": non-finite value at " +
                series.observations[i].date.to_string());
        if (i > 0 && !(series.observations[i - 1].date <
                       series.observations[i].date))
            throw ValidationError(origin + ": duplicate date " +
                                  series.observations[i].date.to_string());
    }
}

} // namespace dlab
