// indicators.hpp
//
// Technical indicators computed locally from daily bars, plus valuation
// ratios from fundamentals. Warm-up positions are NaN, never zero-filled.
#pragma once

#include "dlab/data.hpp"

#include <optional>
#include <vector>

namespace dlab {

// EMA with k = 2/(period+1), seeded by the simple mean of the first window;
// defined from index period-1.
std::vector<double> ema(const std::vector<double>& values, int period);

// Wilder-smoothed RSI, defined from index `period`. Conventions: zero average
// gain and loss give 50; zero loss with positive gain 100; the reverse 0.
std::vector<double> rsi(const std::vector<double>& closes, int period = 14);

struct MacdResult {
    std::vector<double> macd;
    std::vector<double> signal;
    std::vector<double> hist; // macd - signal exactly
};

MacdResult macd(const std::vector<double>& closes, int fast = 12,
                int slow = 26, int signal = 9);

// On-balance volume; index 0 is 0.
std::vector<double> obv(const std::vector<double>& closes,
                        const std::vector<double>& volumes);

struct BollingerResult {
    std::vector<double> upper;
    std::vector<double> middle;
    std::vector<double> lower;
};

// Rolling mean +/- nbdev population standard deviations.
BollingerResult bollinger(const std::vector<double>& closes, int window = 20,
                          double nbdev = 2.0);

// Rolling sample standard deviation (divisor window-1).
std::vector<double> rolling_std(const std::vector<double>& closes, int window);

// r_t = p_t/p_{t-1} - 1; output length n-1.
std::vector<double> simple_returns(const std::vector<double>& prices);

// Trailing-window sample-covariance / sample-variance slope of asset on
// market returns. A window with zero market variance yields NaN there.
std::vector<double> rolling_beta(const std::vector<double>& asset_returns,
                                 const std::vector<double>& market_returns,
                                 int window = 252);

struct RatioSet {
    std::optional<double> pe;
    std::optional<double> peg;
    std::optional<double> pb;
    std::optional<double> dpr;
    std::optional<double> dividend_yield;
};

// PEG divides P/E by growth*100, so growth 0.10 gives the conventional
// PE/10. Zero eps leaves pe/peg/dpr unset; zero growth leaves peg unset.
RatioSet fundamental_ratios(double price, const FundamentalsRecord& rec);

struct IndicatorParams {
    int rsi_period = 14;
    int macd_fast = 12;
    int macd_slow = 26;
    int macd_signal = 9;
    int bollinger_window = 20;
    double bollinger_nbdev = 2.0;
    int rolling_std_window = 20;
    int beta_window = 252;
};

struct IndicatorSet {
    std::vector<double> rsi;
    std::vector<double> macd;
    std::vector<double> macd_signal;
    std::vector<double> macd_hist;
    std::vector<double> obv;
    std::vector<double> bb_upper;
    std::vector<double> bb_middle;
    std::vector<double> bb_lower;
    std::vector<double> rolling_std;
    std::vector<double> simple_return; // aligned to input, NaN at index 0
    std::vector<double> beta;          // empty unless market prices supplied
};

// Computes the full indicator set from adjusted closes and volumes. All
// outputs are input-aligned with NaN warm-ups. `market_prices`, when
// non-empty, must have the input length and enables the beta column.
IndicatorSet
compute_indicators(const std::vector<double>& prices,
                   const std::vector<double>& volumes,
                   const IndicatorParams& params = {},
                   const std::vector<double>& market_prices = {});

} // namespace dlab
