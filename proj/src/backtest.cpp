#include "dlab/backtest.hpp"

#include "dlab/csv.hpp"
#include "dlab/drawdown.hpp"
#include "dlab/errors.hpp"

#include <json.hpp>

#include <functional>

namespace dlab {

namespace {

enum class Action { none, exit_to_cash, enter };

BacktestReport run_engine(const std::vector<double>& prices,
                          const std::vector<Date>& dates, double cost_bps,
                          const std::function<Action(std::size_t, bool)>& decide) {
    if (prices.empty())
        throw ValidationError("backtest needs at least one price");
    for (double p : prices)
        if (!(p > 0)) throw ValidationError("backtest requires positive prices");
    if (!dates.empty() && dates.size() != prices.size())
        throw ValidationError("backtest date axis length mismatch");
    if (cost_bps < 0) throw ValidationError("cost_bps must be >= 0");

    BacktestReport report;
    report.dates = dates;
    if (report.dates.empty()) {
        report.dates.reserve(prices.size());
        for (std::size_t t = 0; t < prices.size(); ++t)
            report.dates.push_back(Date{static_cast<std::int32_t>(t)});
    }

    const double cost_factor = 1.0 - cost_bps / 1e4;
    bool invested = true;
    double equity = 1.0;
    report.equity.reserve(prices.size());
    for (std::size_t t = 0; t < prices.size(); ++t) {
        if (t > 0 && invested) equity *= prices[t] / prices[t - 1];
        const Action action = decide(t, invested);
        if (action == Action::exit_to_cash && invested) {
            equity *= cost_factor;
            invested = false;
            ++report.n_trades;
            report.trades.push_back({report.dates[t], "exit"});
        } else if (action == Action::enter && !invested) {
            equity *= cost_factor;
            invested = true;
            ++report.n_trades;
            report.trades.push_back({report.dates[t], "enter"});
        }
        report.equity.push_back(equity);
    }
    report.total_return = equity - 1.0;
    report.max_drawdown = max_drawdown(report.equity);
    return report;
}

} // namespace

BacktestReport run_signal_strategy(const std::vector<double>& prices,
                                   const std::vector<double>& probabilities,
                                   const StrategyConfig& config,
                                   const std::vector<Date>& dates) {
    if (!(config.reentry_threshold > 0 &&
          config.reentry_threshold <= config.exit_threshold &&
          config.exit_threshold < 1))
        throw ValidationError(
            "thresholds must satisfy 0 < reentry <= exit < 1");
    if (probabilities.size() != prices.size())
        throw ValidationError("probability series length mismatch");
    for (double p : probabilities)
        if (!(p >= 0.0 && p <= 1.0))
            throw ValidationError("probabilities must lie in [0, 1]");

    return run_engine(prices, dates, config.cost_bps,
                      [&](std::size_t t, bool invested) {
                          if (invested &&
                              probabilities[t] >= config.exit_threshold)
                              return Action::exit_to_cash;
                          if (!invested &&
                              probabilities[t] <= config.reentry_threshold)
                              return Action::enter;
                          return Action::none;
                      });
}

BacktestReport run_buy_and_hold(const std::vector<double>& prices,
                                const std::vector<Date>& dates) {
    return run_engine(prices, dates, 0.0,
                      [](std::size_t, bool) { return Action::none; });
}

BacktestReport run_random_trader(const std::vector<double>& prices,
                                 double trade_probability, SeededRng& rng,
                                 double cost_bps,
                                 const std::vector<Date>& dates) {
    if (!(trade_probability >= 0.0 && trade_probability <= 1.0))
        throw ValidationError("trade_probability must lie in [0, 1]");
    return run_engine(prices, dates, cost_bps,
                      [&](std::size_t, bool invested) {
                          const bool flip =
                              trade_probability > 0.0 &&
                              rng.uniform() < trade_probability;
                          if (!flip) return Action::none;
                          return invested ? Action::exit_to_cash
                                          : Action::enter;
                      });
}

std::string equity_csv(const BacktestReport& report) {
    std::string out = "date,equity\n";
    for (std::size_t t = 0; t < report.equity.size(); ++t) {
        out += report.dates[t].to_string();
        out += ',';
        out += format_double(report.equity[t]);
        out += '\n';
    }
    return out;
}

std::string backtest_report_json(const BacktestReport& report) {
    nlohmann::json j;
    j["total_return"] = report.total_return;
    j["max_drawdown"] = report.max_drawdown;
    j["n_trades"] = report.n_trades;
    nlohmann::json trades = nlohmann::json::array();
    for (const auto& t : report.trades)
        trades.push_back({{"date", t.date.to_string()}, {"action", t.action}});
    j["trades"] = trades;
    return j.dump(2) + "\n";
}

} // namespace dlab
