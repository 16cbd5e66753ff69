#include "dlab/indicators.hpp"

#include "dlab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dlab {

namespace {

std::vector<double> undefined_series(std::size_t n) {
    return std::vector<double>(n, undefined_value());
}

void require_length(std::size_t have, std::size_t need, const char* what) {
    if (have < need)
        throw ValidationError(std::string(what) + " needs at least " +
                              std::to_string(need) + " values, got " +
                              std::to_string(have));
}

} // namespace

std::vector<double> ema(const std::vector<double>& values, int period) {
    if (period < 1) throw ValidationError("ema period must be >= 1");
    require_length(values.size(), static_cast<std::size_t>(period), "ema");
    std::vector<double> out = undefined_series(values.size());
    double seed = 0;
    for (int i = 0; i < period; ++i) seed += values[static_cast<std::size_t>(i)];
    seed /= period;
    const std::size_t start = static_cast<std::size_t>(period - 1);
    out[start] = seed;
    const double k = 2.0 / (period + 1.0);
    for (std::size_t i = start + 1; i < values.size(); ++i)
        out[i] = values[i] * k + out[i - 1] * (1.0 - k);
    return out;
}

std::vector<double> rsi(const std::vector<double>& closes, int period) {
    if (period < 1) throw ValidationError("rsi period must be >= 1");
    require_length(closes.size(), static_cast<std::size_t>(period) + 1, "rsi");
    std::vector<double> out = undefined_series(closes.size());
    double avg_gain = 0;
    double avg_loss = 0;
    for (int i = 1; i <= period; ++i) {
        const double change = closes[static_cast<std::size_t>(i)] -
                              closes[static_cast<std::size_t>(i - 1)];
        if (change > 0)
            avg_gain += change;
        else
            avg_loss -= change;
    }
    avg_gain /= period;
    avg_loss /= period;

    const auto to_rsi = [](double gain, double loss) {
        if (gain == 0.0 && loss == 0.0) return 50.0;
        if (loss == 0.0) return 100.0;
        if (gain == 0.0) return 0.0;
        return 100.0 - 100.0 / (1.0 + gain / loss);
    };

    out[static_cast<std::size_t>(period)] = to_rsi(avg_gain, avg_loss);
    for (std::size_t i = static_cast<std::size_t>(period) + 1;
         i < closes.size(); ++i) {
        const double change = closes[i] - closes[i - 1];
        const double gain = change > 0 ? change : 0.0;
        const double loss = change < 0 ? -change : 0.0;
        avg_gain = (avg_gain * (period - 1) + gain) / period;
        avg_loss = (avg_loss * (period - 1) + loss) / period;
        out[i] = to_rsi(avg_gain, avg_loss);
    }
    return out;
}

MacdResult macd(const std::vector<double>& closes, int fast, int slow,
                int signal) {
    if (fast < 1 || slow < 1 || signal < 1)
        throw ValidationError("macd periods must be >= 1");
    if (fast >= slow)
        throw ValidationError("macd fast period must be below the slow period");
    require_length(closes.size(),
                   static_cast<std::size_t>(slow + signal - 1), "macd");

    MacdResult r;
    const auto ema_fast = ema(closes, fast);
    const auto ema_slow = ema(closes, slow);
    r.macd = undefined_series(closes.size());
    const std::size_t macd_start = static_cast<std::size_t>(slow - 1);
    for (std::size_t i = macd_start; i < closes.size(); ++i)
        r.macd[i] = ema_fast[i] - ema_slow[i];

    std::vector<double> defined(r.macd.begin() + static_cast<std::ptrdiff_t>(macd_start),
                                r.macd.end());
    const auto signal_on_defined = ema(defined, signal);
    r.signal = undefined_series(closes.size());
    for (std::size_t i = 0; i < signal_on_defined.size(); ++i)
        r.signal[macd_start + i] = signal_on_defined[i];

    r.hist = undefined_series(closes.size());
    for (std::size_t i = 0; i < closes.size(); ++i)
        if (is_defined(r.macd[i]) && is_defined(r.signal[i]))
            r.hist[i] = r.macd[i] - r.signal[i];
    return r;
}

std::vector<double> obv(const std::vector<double>& closes,
                        const std::vector<double>& volumes) {
    if (closes.size() != volumes.size())
        throw ValidationError("obv needs closes and volumes of equal length");
    require_length(closes.size(), 1, "obv");
    std::vector<double> out(closes.size(), 0.0);
    for (std::size_t i = 1; i < closes.size(); ++i) {
        double step = 0;
        if (closes[i] > closes[i - 1])
            step = volumes[i];
        else if (closes[i] < closes[i - 1])
            step = -volumes[i];
        out[i] = out[i - 1] + step;
    }
    return out;
}

BollingerResult bollinger(const std::vector<double>& closes, int window,
                          double nbdev) {
    if (window < 2) throw ValidationError("bollinger window must be >= 2");
    require_length(closes.size(), static_cast<std::size_t>(window),
                   "bollinger");
    BollingerResult r;
    r.upper = undefined_series(closes.size());
    r.middle = undefined_series(closes.size());
    r.lower = undefined_series(closes.size());
    for (std::size_t end = static_cast<std::size_t>(window) - 1;
         end < closes.size(); ++end) {
        const std::size_t begin = end + 1 - static_cast<std::size_t>(window);
        double mean = 0;
        for (std::size_t i = begin; i <= end; ++i) mean += closes[i];
        mean /= window;
        double ss = 0;
        for (std::size_t i = begin; i <= end; ++i)
            ss += (closes[i] - mean) * (closes[i] - mean);
        const double pop_std = std::sqrt(ss / window);
        r.middle[end] = mean;
        r.upper[end] = mean + nbdev * pop_std;
        r.lower[end] = mean - nbdev * pop_std;
    }
    return r;
}

std::vector<double> rolling_std(const std::vector<double>& closes,
                                int window) {
    if (window < 2) throw ValidationError("rolling_std window must be >= 2");
    require_length(closes.size(), static_cast<std::size_t>(window),
                   "rolling_std");
    std::vector<double> out = undefined_series(closes.size());
    for (std::size_t end = static_cast<std::size_t>(window) - 1;
         end < closes.size(); ++end) {
        const std::size_t begin = end + 1 - static_cast<std::size_t>(window);
        double mean = 0;
        for (std::size_t i = begin; i <= end; ++i) mean += closes[i];
        mean /= window;
        double ss = 0;
        for (std::size_t i = begin; i <= end; ++i)
            ss += (closes[i] - mean) * (closes[i] - mean);
        out[end] = std::sqrt(ss / (window - 1));
    }
    return out;
}

std::vector<double> simple_returns(const std::vector<double>& prices) {
    require_length(prices.size(), 2, "simple_returns");
    for (double p : prices)
        if (!(p > 0))
            throw ValidationError("simple_returns requires positive prices");
    std::vector<double> out;
    out.reserve(prices.size() - 1);
    for (std::size_t i = 1; i < prices.size(); ++i)
        out.push_back(prices[i] / prices[i - 1] - 1.0);
    return out;
}

std::vector<double> rolling_beta(const std::vector<double>& asset_returns,
                                 const std::vector<double>& market_returns,
                                 int window) {
    if (window < 2) throw ValidationError("rolling_beta window must be >= 2");
    if (asset_returns.size() != market_returns.size())
        throw ValidationError("rolling_beta needs equal-length return series");
    require_length(asset_returns.size(), static_cast<std::size_t>(window),
                   "rolling_beta");
    std::vector<double> out = undefined_series(asset_returns.size());
    for (std::size_t end = static_cast<std::size_t>(window) - 1;
         end < asset_returns.size(); ++end) {
        const std::size_t begin = end + 1 - static_cast<std::size_t>(window);
        double mean_a = 0;
        double mean_m = 0;
        for (std::size_t i = begin; i <= end; ++i) {
            mean_a += asset_returns[i];
            mean_m += market_returns[i];
        }
        mean_a /= window;
        mean_m /= window;
        double cov = 0;
        double var_m = 0;
        for (std::size_t i = begin; i <= end; ++i) {
            cov += (asset_returns[i] - mean_a) * (market_returns[i] - mean_m);
            var_m += (market_returns[i] - mean_m) * (market_returns[i] - mean_m);
        }
        if (var_m != 0.0) out[end] = cov / var_m;
    }
    return out;
}

RatioSet fundamental_ratios(double price, const FundamentalsRecord& rec) {
    if (!(price > 0))
        throw ValidationError("fundamental_ratios requires a positive price");
    RatioSet r;
    if (rec.eps != 0.0) {
        r.pe = price / rec.eps;
        r.dpr = rec.dividends_per_share / rec.eps;
        if (rec.earnings_growth_rate != 0.0)
            r.peg = *r.pe / (rec.earnings_growth_rate * 100.0);
    }
    if (rec.book_value_per_share != 0.0) r.pb = price / rec.book_value_per_share;
    r.dividend_yield = rec.dividends_per_share / price;
    return r;
}

IndicatorSet compute_indicators(const std::vector<double>& prices,
                                const std::vector<double>& volumes,
                                const IndicatorParams& params,
                                const std::vector<double>& market_prices) {
    IndicatorSet set;
    set.rsi = rsi(prices, params.rsi_period);
    const MacdResult m =
        macd(prices, params.macd_fast, params.macd_slow, params.macd_signal);
    set.macd = m.macd;
    set.macd_signal = m.signal;
    set.macd_hist = m.hist;
    set.obv = obv(prices, volumes);
    const BollingerResult b =
        bollinger(prices, params.bollinger_window, params.bollinger_nbdev);
    set.bb_upper = b.upper;
    set.bb_middle = b.middle;
    set.bb_lower = b.lower;
    set.rolling_std = rolling_std(prices, params.rolling_std_window);
    set.simple_return = undefined_series(prices.size());
    const auto rets = simple_returns(prices);
    for (std::size_t i = 0; i < rets.size(); ++i) set.simple_return[i + 1] = rets[i];
    if (!market_prices.empty()) {
        if (market_prices.size() != prices.size())
            throw ValidationError(
                "market price series must match the ticker series length");
        const auto market_rets = simple_returns(market_prices);
        const auto beta = rolling_beta(rets, market_rets, params.beta_window);
        set.beta = undefined_series(prices.size());
        for (std::size_t i = 0; i < beta.size(); ++i) set.beta[i + 1] = beta[i];
    }
    return set;
}

} // namespace dlab
