// backtest.hpp
//
// Trading simulation of the downturn signal against buy-and-hold and random
// baselines. All three strategies share one engine so that trivially
// equivalent configurations produce byte-identical reports.
#pragma once

#include "dlab/dates.hpp"
#include "dlab/numerics.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace dlab {

struct StrategyConfig {
    double exit_threshold = 0.5;
    double reentry_threshold = 0.3; // hysteresis: must not exceed exit
    double cost_bps = 0.0;          // per-trade cost in basis points
};

struct TradeAction {
    Date date;
    std::string action; // "exit" or "enter"
};

struct BacktestReport {
    double total_return = 0;  // final equity - 1
    double max_drawdown = 0;  // from the equity curve
    std::size_t n_trades = 0;
    std::vector<Date> dates;
    std::vector<double> equity; // starts at 1.0, positive throughout
    std::vector<TradeAction> trades;
};

// Starts fully invested. A day with probability >= exit_threshold moves to
// cash at that day's close (cost applied); probability <= reentry_threshold
// re-enters at the close. Equity compounds with the asset while invested and
// holds flat in cash. `dates` may be empty, in which case sequential serial
// dates are used.
BacktestReport run_signal_strategy(const std::vector<double>& prices,
                                   const std::vector<double>& probabilities,
                                   const StrategyConfig& config,
                                   const std::vector<Date>& dates = {});

BacktestReport run_buy_and_hold(const std::vector<double>& prices,
                                const std::vector<Date>& dates = {});

// Flips between invested and cash with the given per-day probability, drawn
// from rng; mechanics otherwise identical to the signal strategy.
BacktestReport run_random_trader(const std::vector<double>& prices,
                                 double trade_probability, SeededRng& rng,
                                 double cost_bps = 0.0,
                                 const std::vector<Date>& dates = {});

// Equity curve CSV: header `date,equity`.
std::string equity_csv(const BacktestReport& report);
std::string backtest_report_json(const BacktestReport& report);

} // namespace dlab
