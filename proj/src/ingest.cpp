#include "dlab/ingest.hpp"

#include "dlab/csv.hpp"
#include "dlab/errors.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace dlab {

namespace {

const char* const kOhlcvHeader = "date,open,high,low,close,adjusted_close,volume";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string join_header(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += fields[i];
    }
    return out;
}

} // namespace

TickerSeries parse_ohlcv_csv(std::string_view text, std::string ticker,
                             const std::string& origin) {
    const CsvDocument doc = parse_csv(text, origin);
    if (join_header(doc.header) != kOhlcvHeader)
        throw ParseError(origin + ": expected header '" +
                         std::string(kOhlcvHeader) + "', got '" +
                         join_header(doc.header) + "'");
    TickerSeries series;
    series.ticker = std::move(ticker);
    struct RowRef {
        Bar bar;
        int row;
    };
    std::vector<RowRef> rows;
    rows.reserve(doc.rows.size());
    for (std::size_t i = 0; i < doc.rows.size(); ++i) {
        const auto& fields = doc.rows[i];
        const int row = doc.line_numbers[i];
        const std::string ctx = origin + " row " + std::to_string(row);
        if (fields.size() != 7)
            throw ParseError(ctx + ": expected 7 fields, got " +
                             std::to_string(fields.size()));
        Bar bar;
        try {
            bar.date = Date::parse(fields[0]);
        } catch (const ParseError& e) {
            throw ParseError(ctx + ": " + e.what());
        }
        bar.open = parse_double_field(fields[1], ctx + ", column open");
        bar.high = parse_double_field(fields[2], ctx + ", column high");
        bar.low = parse_double_field(fields[3], ctx + ", column low");
        bar.close = parse_double_field(fields[4], ctx + ", column close");
        bar.adjusted_close =
            parse_double_field(fields[5], ctx + ", column adjusted_close");
        bar.volume = parse_double_field(fields[6], ctx + ", column volume");
        validate_bar(bar, origin, row);
        rows.push_back({bar, row});
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const RowRef& a, const RowRef& b) {
                         return a.bar.date < b.bar.date;
                     });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i - 1].bar.date == rows[i].bar.date)
            throw ValidationError(origin + ": duplicate date " +
                                  rows[i].bar.date.to_string() + " at row " +
                                  std::to_string(rows[i].row));
    series.bars.reserve(rows.size());
    for (auto& r : rows) series.bars.push_back(r.bar);
    validate_ticker_series(series, origin);
    return series;
}

TickerSeries load_ohlcv_csv(const std::string& path, std::string ticker) {
    return parse_ohlcv_csv(read_file(path), std::move(ticker), path);
}

std::string serialize_ohlcv_csv(const TickerSeries& series) {
    std::string out = kOhlcvHeader;
    out += '\n';
    for (const Bar& b : series.bars) {
        out += b.date.to_string();
        for (double v : {b.open, b.high, b.low, b.close, b.adjusted_close,
                         b.volume}) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

void write_ohlcv_csv(const TickerSeries& series, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(path + ": cannot open file for writing");
    out << serialize_ohlcv_csv(series);
}

MacroSeries parse_macro_csv(const std::string& name, std::string_view text,
                            const std::string& origin) {
    if (!is_macro_series_name(name))
        throw ValidationError(origin + ": unknown macro series name '" + name +
                              "'");
    const CsvDocument doc = parse_csv(text, origin);
    if (join_header(doc.header) != "date,value")
        throw ParseError(origin + ": expected header 'date,value', got '" +
                         join_header(doc.header) + "'");
    MacroSeries series;
    series.name = name;
    for (std::size_t i = 0; i < doc.rows.size(); ++i) {
        const auto& fields = doc.rows[i];
        const std::string ctx =
            origin + " row " + std::to_string(doc.line_numbers[i]);
        if (fields.size() != 2)
            throw ParseError(ctx + ": expected 2 fields, got " +
                             std::to_string(fields.size()));
        MacroObservation obs;
        try {
            obs.date = Date::parse(fields[0]);
        } catch (const ParseError& e) {
            throw ParseError(ctx + ": " + e.what());
        }
        obs.value = parse_double_field(fields[1], ctx + ", column value");
        series.observations.push_back(obs);
    }
    std::stable_sort(series.observations.begin(), series.observations.end(),
                     [](const MacroObservation& a, const MacroObservation& b) {
                         return a.date < b.date;
                     });
    validate_macro_series(series, origin);
    return series;
}

MacroSeries load_macro_csv(const std::string& name, const std::string& path) {
    return parse_macro_csv(name, read_file(path), path);
}

std::string serialize_macro_csv(const MacroSeries& series) {
    std::string out = "date,value\n";
    for (const MacroObservation& obs : series.observations) {
        out += obs.date.to_string();
        out += ',';
        out += format_double(obs.value);
        out += '\n';
    }
    return out;
}

AlignedPanel align_and_merge(const std::vector<TickerSeries>& tickers,
                             const std::vector<MacroSeries>& macros) {
    if (tickers.empty())
        throw ValidationError("align_and_merge needs at least one ticker series");

    std::vector<const TickerSeries*> ordered;
    for (const auto& t : tickers) ordered.push_back(&t);
    std::sort(ordered.begin(), ordered.end(),
              [](const TickerSeries* a, const TickerSeries* b) {
                  return a->ticker < b->ticker;
              });
    for (std::size_t i = 1; i < ordered.size(); ++i)
        if (ordered[i - 1]->ticker == ordered[i]->ticker)
            throw ValidationError("duplicate ticker '" + ordered[i]->ticker +
                                  "' in merge");

    std::set<Date> axis;
    for (const Bar& b : ordered[0]->bars) axis.insert(b.date);
    for (std::size_t i = 1; i < ordered.size(); ++i) {
        std::set<Date> keep;
        for (const Bar& b : ordered[i]->bars)
            if (axis.count(b.date)) keep.insert(b.date);
        axis.swap(keep);
    }
    if (axis.empty())
        throw ValidationError("empty panel: tickers share no trading dates");

    AlignedPanel panel;
    panel.dates.assign(axis.begin(), axis.end());

    for (const TickerSeries* series : ordered) {
        std::vector<double> open, high, low, close, adj, volume;
        std::size_t bi = 0;
        for (const Date& d : panel.dates) {
            while (series->bars[bi].date < d) ++bi;
            const Bar& b = series->bars[bi];
            open.push_back(b.open);
            high.push_back(b.high);
            low.push_back(b.low);
            close.push_back(b.close);
            adj.push_back(b.adjusted_close);
            volume.push_back(b.volume);
        }
        const std::string& t = series->ticker;
        panel.add_column(make_column_name(t, "open"), std::move(open));
        panel.add_column(make_column_name(t, "high"), std::move(high));
        panel.add_column(make_column_name(t, "low"), std::move(low));
        panel.add_column(make_column_name(t, "close"), std::move(close));
        panel.add_column(make_column_name(t, "adjusted_close"), std::move(adj));
        panel.add_column(make_column_name(t, "volume"), std::move(volume));
    }

    std::vector<const MacroSeries*> ordered_macros;
    for (const auto& m : macros) ordered_macros.push_back(&m);
    std::sort(ordered_macros.begin(), ordered_macros.end(),
              [](const MacroSeries* a, const MacroSeries* b) {
                  return a->name < b->name;
              });
    for (const MacroSeries* m : ordered_macros) {
        if (m->observations.empty() ||
            panel.dates.front() < m->observations.front().date)
            throw ValidationError(
                "macro series '" + m->name +
                "' starts after the panel start (leading gap)");
        std::vector<double> filled;
        std::size_t oi = 0;
        for (const Date& d : panel.dates) {
            while (oi + 1 < m->observations.size() &&
                   !(d < m->observations[oi + 1].date))
                ++oi;
            filled.push_back(m->observations[oi].value);
        }
        panel.add_column(m->name, std::move(filled));
    }
    return panel;
}

AlignedPanel restrict_common_range(const AlignedPanel& panel,
                                   const std::vector<std::string>& tickers,
                                   int trailing_years) {
    if (panel.n_rows() == 0) throw ValidationError("cannot restrict an empty panel");
    std::size_t first = 0;
    std::size_t last = panel.n_rows() - 1;
    for (const auto& ticker : tickers) {
        const auto cols = panel.ticker_columns(ticker);
        if (cols.empty())
            throw ValidationError("panel has no columns for ticker '" + ticker +
                                  "'");
        std::size_t t_first = panel.n_rows();
        std::size_t t_last = 0;
        bool any = false;
        for (std::size_t r = 0; r < panel.n_rows(); ++r) {
            for (const auto& name : cols) {
                if (is_defined(panel.column(name)[r])) {
                    if (!any) t_first = r;
                    any = true;
                    t_last = r;
                    break;
                }
            }
        }
        if (!any)
            throw ValidationError("ticker '" + ticker +
                                  "' has no defined values in the panel");
        first = std::max(first, t_first);
        last = std::min(last, t_last);
    }
    if (first > last)
        throw ValidationError("empty panel: ticker ranges do not overlap");

    if (trailing_years > 0) {
        const Date cutoff = add_years(panel.dates[last], -trailing_years);
        while (first <= last && panel.dates[first] < cutoff) ++first;
        if (first > last)
            throw ValidationError("empty panel after trailing-year cut");
    }

    AlignedPanel out;
    out.dates.assign(panel.dates.begin() + static_cast<std::ptrdiff_t>(first),
                     panel.dates.begin() + static_cast<std::ptrdiff_t>(last + 1));
    out.names = panel.names;
    out.columns.reserve(panel.n_cols());
    for (const auto& col : panel.columns)
        out.columns.emplace_back(col.begin() + static_cast<std::ptrdiff_t>(first),
                                 col.begin() + static_cast<std::ptrdiff_t>(last + 1));
    return out;
}

} // namespace dlab
