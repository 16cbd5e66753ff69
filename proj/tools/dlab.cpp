// dlab.cpp
//
// Command-line pipeline: fetch, ingest, indicators, label, correlate,
// cluster, regress, classify, backtest, report. Configuration comes from a
// JSON file with flag overrides (flags win); every stage writes its outputs
// plus a manifest with content hashes under the output directory.

#include "dlab/backtest.hpp"
#include "dlab/csv.hpp"
#include "dlab/data.hpp"
#include "dlab/drawdown.hpp"
#include "dlab/errors.hpp"
#include "dlab/fetch.hpp"
#include "dlab/indicators.hpp"
#include "dlab/ingest.hpp"
#include "dlab/models.hpp"
#include "dlab/numerics.hpp"
#include "dlab/panel.hpp"
#include "dlab/tables.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dlab;

namespace {

// Usage problems exit with 2; data errors 3; numeric/model errors 4.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Seed salts for the independent random streams derived from the run seed.
constexpr std::uint64_t kResampleSalt = 1001;
constexpr std::uint64_t kRandomTraderSalt = 2002;

// Probability cutoff turning predicted probabilities into class labels.
constexpr double kClassifyThreshold = 0.5;

const std::vector<std::string> kDefaultTickers = {
    "GLW", "IBM",  "MSI",  "TXN",  "APH",  "HPQ", "ADP",  "NXPI",
    "IT",  "STX",  "V",    "TER",  "AVGO", "BR",  "ADI",  "MA",
    "TYL", "MU",   "TRMB", "ORCL", "AMAT", "FIS", "ANSS", "WDC",
    "PAYX", "MSFT", "KLAC", "JKHY", "AAPL"};

// Default model features: the logistic table's variable set, minus the two
// exact linear combinations (macd_hist = macd - macd_signal and
// bb_middle = (bb_upper + bb_lower)/2) that a full-rank design cannot carry.
const std::vector<std::string> kDefaultFeatures = {
    "open",          "high",        "close",        "volume",
    "obv",           "macd",        "macd_signal",  "bb_lower",
    "bb_upper",      "simple_return",
    "consumer_sentiment", "cpi",    "durable_goods", "fed_funds",
    "gdp",           "inflation",  "retail_sales",  "yield_10y",
    "yield_5y"};

// ==========================================================================
// Config
// ==========================================================================

struct RunConfig {
    fs::path config_dir; // base for resolving relative config paths
    std::string data_dir = "data";
    std::string data_dir_display = "data";
    std::string output_dir = "out";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> tickers = kDefaultTickers;
    // name -> resolved path and the path as written (for manifests)
    std::map<std::string, std::string> macros;
    std::map<std::string, std::string> macros_display;
    ProviderConfig provider;
    IndicatorParams indicators;
    std::string market_ticker;
    double min_depth = 0.05;
    double target_depth = 0.10;
    int lookahead = 0;
    std::size_t min_duration = 0;
    std::vector<std::string> feature_bases = kDefaultFeatures;
    std::vector<std::pair<std::string, std::string>> feature_interactions;
    bool intercept = true;
    std::string train_ticker;
    std::string test_ticker;
    std::string target_column;
    int trailing_years = 40;
    std::string resample_mode = "up"; // up | down | none
    double alpha = 0.05;
    StrategyConfig strategy;
    std::optional<double> random_trade_probability;
    std::string cluster_matrix;
    std::string cluster_matrix_display;
    std::size_t k_min = 2;
    std::size_t k_max = 10;
    int restarts = 10;
    std::optional<std::size_t> explicit_k;
    bool cluster_from_panel = false;
};

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(path.string() + ": cannot open file for writing");
    out << content;
}

std::string resolve_against(const fs::path& base, const std::string& path) {
    fs::path p(path);
    if (p.is_absolute() || base.empty()) return p.string();
    return (base / p).string();
}

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            throw ParseError("config: unknown key '" + key + "' in " + where);
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj[key].get<T>();
    } catch (const json::exception&) {
        throw ParseError(std::string("config: bad value for '") + key + "'");
    }
}

RunConfig load_config(const std::string& path) {
    RunConfig cfg;
    if (path.empty()) return cfg;

    json root;
    try {
        root = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw ParseError(path + ": invalid JSON: " + e.what());
    }
    cfg.config_dir = fs::path(path).parent_path();

    check_keys(root, "top level",
               {"data_dir", "output_dir", "seed", "tickers", "macros",
                "provider", "indicators", "drawdown", "features",
                "train_ticker", "test_ticker", "target_column",
                "trailing_years", "resample", "alpha", "strategy",
                "random_trade_probability", "cluster"});

    cfg.data_dir_display = get_or<std::string>(root, "data_dir", cfg.data_dir);
    cfg.data_dir = resolve_against(cfg.config_dir, cfg.data_dir_display);
    cfg.output_dir =
        resolve_against(cfg.config_dir,
                        get_or<std::string>(root, "output_dir", cfg.output_dir));
    if (root.contains("seed")) cfg.seed = root["seed"].get<std::uint64_t>();
    if (root.contains("tickers"))
        cfg.tickers = root["tickers"].get<std::vector<std::string>>();
    if (root.contains("macros")) {
        for (const auto& [name, p] : root["macros"].items()) {
            const std::string display = p.get<std::string>();
            cfg.macros_display[name] = display;
            cfg.macros[name] = resolve_against(cfg.config_dir, display);
        }
    }
    if (root.contains("provider")) {
        const json& p = root["provider"];
        check_keys(p, "provider",
                   {"base_url", "api_key", "requests_per_minute",
                    "max_retries"});
        cfg.provider.base_url = get_or<std::string>(p, "base_url", "");
        cfg.provider.api_key = get_or<std::string>(p, "api_key", "");
        cfg.provider.requests_per_minute =
            get_or<int>(p, "requests_per_minute", 5);
        cfg.provider.max_retries = get_or<int>(p, "max_retries", 3);
    }
    if (root.contains("indicators")) {
        const json& p = root["indicators"];
        check_keys(p, "indicators",
                   {"rsi_period", "macd_fast", "macd_slow", "macd_signal",
                    "bollinger_window", "bollinger_nbdev",
                    "rolling_std_window", "beta_window", "market_ticker"});
        cfg.indicators.rsi_period = get_or<int>(p, "rsi_period", 14);
        cfg.indicators.macd_fast = get_or<int>(p, "macd_fast", 12);
        cfg.indicators.macd_slow = get_or<int>(p, "macd_slow", 26);
        cfg.indicators.macd_signal = get_or<int>(p, "macd_signal", 9);
        cfg.indicators.bollinger_window = get_or<int>(p, "bollinger_window", 20);
        cfg.indicators.bollinger_nbdev =
            get_or<double>(p, "bollinger_nbdev", 2.0);
        cfg.indicators.rolling_std_window =
            get_or<int>(p, "rolling_std_window", 20);
        cfg.indicators.beta_window = get_or<int>(p, "beta_window", 252);
        cfg.market_ticker = get_or<std::string>(p, "market_ticker", "");
    }
    if (root.contains("drawdown")) {
        const json& p = root["drawdown"];
        check_keys(p, "drawdown",
                   {"min_depth", "target_depth", "lookahead", "min_duration"});
        cfg.min_depth = get_or<double>(p, "min_depth", 0.05);
        cfg.target_depth = get_or<double>(p, "target_depth", 0.10);
        cfg.lookahead = get_or<int>(p, "lookahead", 0);
        cfg.min_duration =
            static_cast<std::size_t>(get_or<int>(p, "min_duration", 0));
    }
    if (root.contains("features")) {
        const json& p = root["features"];
        check_keys(p, "features", {"bases", "interactions", "intercept"});
        if (p.contains("bases"))
            cfg.feature_bases = p["bases"].get<std::vector<std::string>>();
        if (p.contains("interactions"))
            for (const auto& pair : p["interactions"]) {
                if (!pair.is_array() || pair.size() != 2)
                    throw ParseError(
                        "config: each interaction must be a 2-element array");
                cfg.feature_interactions.emplace_back(
                    pair[0].get<std::string>(), pair[1].get<std::string>());
            }
        cfg.intercept = get_or<bool>(p, "intercept", true);
    }
    cfg.train_ticker = get_or<std::string>(root, "train_ticker", "");
    cfg.test_ticker = get_or<std::string>(root, "test_ticker", "");
    cfg.target_column = get_or<std::string>(root, "target_column", "");
    cfg.trailing_years = get_or<int>(root, "trailing_years", 40);
    cfg.resample_mode = get_or<std::string>(root, "resample", "up");
    cfg.alpha = get_or<double>(root, "alpha", 0.05);
    if (root.contains("strategy")) {
        const json& p = root["strategy"];
        check_keys(p, "strategy",
                   {"exit_threshold", "reentry_threshold", "cost_bps"});
        cfg.strategy.exit_threshold = get_or<double>(p, "exit_threshold", 0.5);
        cfg.strategy.reentry_threshold =
            get_or<double>(p, "reentry_threshold", 0.3);
        cfg.strategy.cost_bps = get_or<double>(p, "cost_bps", 0.0);
    }
    if (root.contains("random_trade_probability"))
        cfg.random_trade_probability =
            root["random_trade_probability"].get<double>();
    if (root.contains("cluster")) {
        const json& p = root["cluster"];
        check_keys(p, "cluster",
                   {"matrix_csv", "k_min", "k_max", "restarts", "k",
                    "from_panel"});
        cfg.cluster_matrix_display = get_or<std::string>(p, "matrix_csv", "");
        if (!cfg.cluster_matrix_display.empty())
            cfg.cluster_matrix =
                resolve_against(cfg.config_dir, cfg.cluster_matrix_display);
        cfg.k_min = static_cast<std::size_t>(get_or<int>(p, "k_min", 2));
        cfg.k_max = static_cast<std::size_t>(get_or<int>(p, "k_max", 10));
        cfg.restarts = get_or<int>(p, "restarts", 10);
        if (p.contains("k") && !p["k"].is_null())
            cfg.explicit_k = static_cast<std::size_t>(p["k"].get<int>());
        cfg.cluster_from_panel = get_or<bool>(p, "from_panel", false);
    }
    return cfg;
}

// ==========================================================================
// Manifests
// ==========================================================================

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string content_hash(const std::string& bytes) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

struct ManifestInput {
    std::string display; // path as configured, never absolute output paths
    std::string path;    // resolved path to hash
};

void write_manifest(const RunConfig& cfg, const std::string& stage,
                    json parameters, const std::vector<ManifestInput>& inputs,
                    const std::vector<std::string>& output_names) {
    json m;
    m["command"] = stage;
    m["parameters"] = std::move(parameters);
    if (cfg.seed)
        m["seed"] = *cfg.seed;
    else
        m["seed"] = nullptr;
    json in = json::object();
    for (const auto& i : inputs) in[i.display] = content_hash(read_text_file(i.path));
    m["inputs"] = in;
    json out = json::object();
    for (const auto& name : output_names)
        out[name] = content_hash(
            read_text_file((fs::path(cfg.output_dir) / name).string()));
    m["outputs"] = out;
    write_text_file(fs::path(cfg.output_dir) / (stage + "_manifest.json"),
                    m.dump(2) + "\n");
}

void ensure_output_dir(const RunConfig& cfg) {
    fs::create_directories(cfg.output_dir);
}

fs::path out_path(const RunConfig& cfg, const std::string& name) {
    return fs::path(cfg.output_dir) / name;
}

// ==========================================================================
// Shared helpers
// ==========================================================================

std::string price_csv_path(const RunConfig& cfg, const std::string& ticker) {
    return (fs::path(cfg.data_dir) / "prices" / (ticker + ".csv")).string();
}

std::string price_csv_display(const RunConfig& cfg, const std::string& ticker) {
    return cfg.data_dir_display + "/prices/" + ticker + ".csv";
}

// Loads the most processed panel available unless an explicit file is given.
// `newest` caps the fallback chain so a stage that adds columns never reads
// its own output on a re-run.
AlignedPanel load_stage_panel(const RunConfig& cfg,
                              const std::string& explicit_panel,
                              std::string& used_name,
                              const std::string& newest = "panel_labeled.csv") {
    std::vector<std::string> candidates;
    if (!explicit_panel.empty()) {
        candidates = {explicit_panel};
    } else {
        bool within = false;
        for (const auto& name :
             {"panel_labeled.csv", "panel_indicators.csv", "panel.csv"}) {
            within = within || name == newest;
            if (within) candidates.push_back(name);
        }
    }
    for (const auto& name : candidates) {
        const fs::path p = out_path(cfg, name);
        if (fs::exists(p)) {
            used_name = name;
            return load_panel_csv(p.string());
        }
    }
    throw ValidationError(
        "no panel file found under '" + cfg.output_dir +
        "'; run the ingest stage first");
}

std::string resolve_feature_column(const AlignedPanel& panel,
                                   const std::string& name,
                                   const std::string& ticker) {
    if (panel.has_column(name)) return name;
    if (!ticker.empty()) {
        const std::string qualified = make_column_name(ticker, name);
        if (panel.has_column(qualified)) return qualified;
        throw ValidationError("missing column: neither '" + name + "' nor '" +
                              qualified + "' exists in the panel");
    }
    throw ValidationError("missing column '" + name + "'");
}

FeatureSpec resolve_features(const AlignedPanel& panel, const RunConfig& cfg,
                             const std::string& ticker) {
    FeatureSpec spec;
    spec.intercept = cfg.intercept;
    for (const auto& base : cfg.feature_bases)
        spec.bases.push_back(resolve_feature_column(panel, base, ticker));
    for (const auto& [a, b] : cfg.feature_interactions)
        spec.interactions.emplace_back(resolve_feature_column(panel, a, ticker),
                                       resolve_feature_column(panel, b, ticker));
    return spec;
}

std::string translate_term(const std::string& term, const std::string& from,
                           const std::string& to) {
    const std::size_t colon = term.find(':');
    if (colon != std::string::npos)
        return translate_term(term.substr(0, colon), from, to) + ":" +
               translate_term(term.substr(colon + 1), from, to);
    const std::string prefix = from + ".";
    if (term.rfind(prefix, 0) == 0)
        return to + "." + term.substr(prefix.size());
    return term;
}

// Rebuilds a FeatureSpec from the surviving terms of a fit, optionally
// translating ticker-qualified columns to another ticker.
FeatureSpec spec_from_terms(const std::vector<std::string>& terms,
                            const std::string& from, const std::string& to) {
    FeatureSpec spec;
    spec.intercept = false;
    for (const auto& term : terms) {
        if (term == "Constant") {
            spec.intercept = true;
            continue;
        }
        const std::string translated =
            from.empty() ? term : translate_term(term, from, to);
        const std::size_t colon = translated.find(':');
        if (colon != std::string::npos)
            spec.interactions.emplace_back(translated.substr(0, colon),
                                           translated.substr(colon + 1));
        else
            spec.bases.push_back(translated);
    }
    return spec;
}

std::vector<double> gather_rows(const std::vector<double>& column,
                                const std::vector<std::size_t>& rows) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r : rows) out.push_back(column[r]);
    return out;
}

std::uint64_t require_seed(const RunConfig& cfg, const std::string& stage) {
    if (!cfg.seed)
        throw UsageError("stage '" + stage +
                         "' involves randomness and requires --seed or a "
                         "config seed");
    return *cfg.seed;
}

json feature_parameters(const RunConfig& cfg) {
    json j;
    j["bases"] = cfg.feature_bases;
    json inter = json::array();
    for (const auto& [a, b] : cfg.feature_interactions)
        inter.push_back({a, b});
    j["interactions"] = inter;
    j["intercept"] = cfg.intercept;
    return j;
}

// ==========================================================================
// Stages
// ==========================================================================

void cmd_fetch(const RunConfig& cfg) {
    if (cfg.provider.base_url.empty())
        throw UsageError("fetch requires provider.base_url (or --base-url)");
    ensure_output_dir(cfg);
    fs::create_directories(fs::path(cfg.data_dir) / "prices");
    ProviderClient client(cfg.provider);
    std::vector<std::string> outputs_display;
    for (const auto& ticker : cfg.tickers) {
        const TickerSeries series = client.fetch_remote_daily(ticker);
        write_ohlcv_csv(series, price_csv_path(cfg, ticker));
        outputs_display.push_back(price_csv_display(cfg, ticker));
    }
    json params;
    params["base_url"] = cfg.provider.base_url;
    params["function"] = "TIME_SERIES_DAILY_ADJUSTED";
    params["outputsize"] = "full";
    params["requests_per_minute"] = cfg.provider.requests_per_minute;
    params["tickers"] = cfg.tickers;
    json m;
    m["command"] = "fetch";
    m["parameters"] = params;
    m["seed"] = nullptr;
    m["inputs"] = json::object();
    json out = json::object();
    for (std::size_t i = 0; i < cfg.tickers.size(); ++i)
        out[outputs_display[i]] = content_hash(
            read_text_file(price_csv_path(cfg, cfg.tickers[i])));
    m["outputs"] = out;
    write_text_file(out_path(cfg, "fetch_manifest.json"), m.dump(2) + "\n");
}

void cmd_ingest(const RunConfig& cfg) {
    ensure_output_dir(cfg);
    std::vector<TickerSeries> tickers;
    std::vector<ManifestInput> inputs;
    for (const auto& t : cfg.tickers) {
        const std::string path = price_csv_path(cfg, t);
        tickers.push_back(load_ohlcv_csv(path, t));
        inputs.push_back({price_csv_display(cfg, t), path});
    }
    std::vector<MacroSeries> macros;
    for (const auto& [name, path] : cfg.macros) {
        macros.push_back(load_macro_csv(name, path));
        inputs.push_back({cfg.macros_display.at(name), path});
    }
    AlignedPanel panel = align_and_merge(tickers, macros);
    panel = restrict_common_range(panel, cfg.tickers, cfg.trailing_years);
    write_panel_csv(panel, out_path(cfg, "panel.csv").string());

    json params;
    params["tickers"] = cfg.tickers;
    json macro_names = json::array();
    for (const auto& [name, _] : cfg.macros) macro_names.push_back(name);
    params["macros"] = macro_names;
    params["trailing_years"] = cfg.trailing_years;
    write_manifest(cfg, "ingest", params, inputs, {"panel.csv"});
}

void cmd_indicators(const RunConfig& cfg) {
    ensure_output_dir(cfg);
    AlignedPanel panel = load_panel_csv(out_path(cfg, "panel.csv").string());
    const auto tickers = panel.tickers();
    std::vector<double> market_prices;
    if (!cfg.market_ticker.empty())
        market_prices =
            panel.column(make_column_name(cfg.market_ticker, "adjusted_close"));
    for (const auto& t : tickers) {
        const auto prices = panel.column(make_column_name(t, "adjusted_close"));
        const auto volumes = panel.column(make_column_name(t, "volume"));
        const IndicatorSet set = compute_indicators(
            prices, volumes, cfg.indicators,
            t == cfg.market_ticker ? std::vector<double>{} : market_prices);
        panel.add_column(make_column_name(t, "rsi"), set.rsi);
        panel.add_column(make_column_name(t, "macd"), set.macd);
        panel.add_column(make_column_name(t, "macd_signal"), set.macd_signal);
        panel.add_column(make_column_name(t, "macd_hist"), set.macd_hist);
        panel.add_column(make_column_name(t, "obv"), set.obv);
        panel.add_column(make_column_name(t, "bb_upper"), set.bb_upper);
        panel.add_column(make_column_name(t, "bb_middle"), set.bb_middle);
        panel.add_column(make_column_name(t, "bb_lower"), set.bb_lower);
        panel.add_column(make_column_name(t, "rolling_std"), set.rolling_std);
        panel.add_column(make_column_name(t, "simple_return"),
                         set.simple_return);
        if (!set.beta.empty())
            panel.add_column(make_column_name(t, "beta"), set.beta);
    }
    write_panel_csv(panel, out_path(cfg, "panel_indicators.csv").string());

    json params;
    params["rsi_period"] = cfg.indicators.rsi_period;
    params["macd_fast"] = cfg.indicators.macd_fast;
    params["macd_slow"] = cfg.indicators.macd_slow;
    params["macd_signal"] = cfg.indicators.macd_signal;
    params["bollinger_window"] = cfg.indicators.bollinger_window;
    params["bollinger_nbdev"] = cfg.indicators.bollinger_nbdev;
    params["rolling_std_window"] = cfg.indicators.rolling_std_window;
    params["beta_window"] = cfg.indicators.beta_window;
    params["market_ticker"] = cfg.market_ticker;
    write_manifest(cfg, "indicators", params,
                   {{"panel.csv", out_path(cfg, "panel.csv").string()}},
                   {"panel_indicators.csv"});
}

void cmd_label(const RunConfig& cfg, const std::string& explicit_panel,
               const std::vector<std::string>& only_tickers) {
    ensure_output_dir(cfg);
    std::string used;
    AlignedPanel panel =
        load_stage_panel(cfg, explicit_panel, used, "panel_indicators.csv");
    std::vector<std::string> tickers =
        only_tickers.empty() ? panel.tickers() : only_tickers;

    json summary;
    std::vector<std::string> outputs;
    for (const auto& t : tickers) {
        const auto prices = panel.column(make_column_name(t, "adjusted_close"));
        const auto episodes = detect_episodes(prices, cfg.min_depth);
        const std::string episodes_name = "episodes_" + t + ".csv";
        write_text_file(out_path(cfg, episodes_name),
                        serialize_episodes_csv(episodes, panel.dates));
        outputs.push_back(episodes_name);

        const auto labels = label_target(prices, cfg.target_depth,
                                         cfg.lookahead, cfg.min_duration);
        std::vector<double> target(labels.begin(), labels.end());
        panel.add_column(make_column_name(t, "target"), target);

        json counts;
        counts["episodes_at_0.05"] = detect_episodes(prices, 0.05).size();
        counts["episodes_at_0.10"] = detect_episodes(prices, 0.10).size();
        counts["episodes_at_0.20"] = detect_episodes(prices, 0.20).size();
        counts["positive_labels"] =
            static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
        counts["rows"] = prices.size();
        summary[t] = counts;
    }
    write_panel_csv(panel, out_path(cfg, "panel_labeled.csv").string());
    outputs.push_back("panel_labeled.csv");
    write_text_file(out_path(cfg, "label_summary.json"),
                    summary.dump(2) + "\n");
    outputs.push_back("label_summary.json");

    json params;
    params["min_depth"] = cfg.min_depth;
    params["target_depth"] = cfg.target_depth;
    params["lookahead"] = cfg.lookahead;
    params["min_duration"] = cfg.min_duration;
    params["tickers"] = tickers;
    params["price_column"] = "adjusted_close";
    write_manifest(cfg, "label", params,
                   {{used, out_path(cfg, used).string()}}, outputs);
}

void cmd_correlate(const RunConfig& cfg, const std::string& explicit_panel,
                   const std::vector<std::string>& only_columns) {
    ensure_output_dir(cfg);
    std::string used;
    const AlignedPanel panel = load_stage_panel(cfg, explicit_panel, used);

    std::vector<std::string> names;
    if (only_columns.empty()) {
        for (const auto& name : panel.names)
            if (parse_column_name(name).feature != "target")
                names.push_back(name);
    } else {
        for (const auto& name : only_columns)
            names.push_back(resolve_feature_column(panel, name, ""));
    }
    if (names.size() < 2)
        throw ValidationError("correlation needs at least 2 columns");

    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < panel.n_rows(); ++r) {
        bool ok = true;
        for (const auto& name : names)
            if (!is_defined(panel.column(name)[r])) {
                ok = false;
                break;
            }
        if (ok) rows.push_back(r);
    }
    if (rows.size() < 2)
        throw ValidationError("fewer than 2 fully defined rows for correlation");

    std::vector<std::vector<double>> columns;
    for (const auto& name : names)
        columns.push_back(gather_rows(panel.column(name), rows));
    const Matrix corr = correlation_matrix(columns, names);
    write_text_file(out_path(cfg, "correlation.csv"),
                    correlation_csv(corr, names));

    json params;
    params["columns"] = names;
    params["rows_used"] = rows.size();
    write_manifest(cfg, "correlate", params,
                   {{used, out_path(cfg, used).string()}},
                   {"correlation.csv"});
}

// Stock-rows matrix for clustering: either an external labeled CSV or the
// panel vectorized as one row per ticker, columns = date-feature pairs.
struct ClusterInput {
    Matrix rows;
    std::vector<std::string> labels;
    std::vector<ManifestInput> inputs;
    std::string source;
};

ClusterInput cluster_input(const RunConfig& cfg) {
    ClusterInput in;
    if (!cfg.cluster_from_panel) {
        if (cfg.cluster_matrix.empty())
            throw UsageError(
                "cluster needs cluster.matrix_csv (or --matrix), or "
                "--from-panel");
        const CsvDocument doc = read_csv(cfg.cluster_matrix);
        if (doc.header.empty() || doc.header[0] != "label")
            throw ParseError(cfg.cluster_matrix +
                             ": first column must be 'label'");
        const std::size_t p = doc.header.size() - 1;
        in.rows = Matrix(doc.rows.size(), p);
        for (std::size_t r = 0; r < doc.rows.size(); ++r) {
            if (doc.rows[r].size() != doc.header.size())
                throw ParseError(cfg.cluster_matrix + " row " +
                                 std::to_string(doc.line_numbers[r]) +
                                 ": wrong field count");
            in.labels.push_back(doc.rows[r][0]);
            for (std::size_t c = 0; c < p; ++c)
                in.rows.at(r, c) = parse_double_field(
                    doc.rows[r][c + 1],
                    cfg.cluster_matrix + " row " +
                        std::to_string(doc.line_numbers[r]));
        }
        in.inputs.push_back({cfg.cluster_matrix_display, cfg.cluster_matrix});
        in.source = cfg.cluster_matrix_display;
        return in;
    }

    std::string used;
    const AlignedPanel panel = load_stage_panel(cfg, "", used);
    const auto tickers = panel.tickers();
    if (tickers.size() < 2)
        throw ValidationError("panel clustering needs at least 2 tickers");
    // Features shared by every ticker, excluding the target.
    std::vector<std::string> features;
    for (const auto& name : panel.ticker_columns(tickers[0])) {
        const std::string feature = parse_column_name(name).feature;
        if (feature == "target") continue;
        bool shared = true;
        for (const auto& t : tickers)
            if (!panel.has_column(make_column_name(t, feature))) {
                shared = false;
                break;
            }
        if (shared) features.push_back(feature);
    }
    // Rows where every ticker-feature value is defined.
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < panel.n_rows(); ++r) {
        bool ok = true;
        for (const auto& t : tickers) {
            for (const auto& f : features)
                if (!is_defined(panel.column(make_column_name(t, f))[r])) {
                    ok = false;
                    break;
                }
            if (!ok) break;
        }
        if (ok) rows.push_back(r);
    }
    if (rows.empty())
        throw ValidationError("no fully defined rows to vectorize");
    in.rows = Matrix(tickers.size(), rows.size() * features.size());
    for (std::size_t i = 0; i < tickers.size(); ++i) {
        std::size_t c = 0;
        for (const auto& f : features) {
            const auto& col = panel.column(make_column_name(tickers[i], f));
            for (std::size_t r : rows) in.rows.at(i, c++) = col[r];
        }
    }
    in.labels = tickers;
    in.inputs.push_back({used, out_path(cfg, used).string()});
    in.source = used;
    return in;
}

void cmd_cluster(const RunConfig& cfg) {
    ensure_output_dir(cfg);
    const std::uint64_t seed = require_seed(cfg, "cluster");
    ClusterInput in = cluster_input(cfg);
    const ZScoreResult scaled = zscore_columns(in.rows);
    const ElbowReport report =
        kmeans_sweep(scaled.scaled, cfg.k_min, cfg.k_max, cfg.restarts, seed,
                     cfg.explicit_k);
    write_text_file(out_path(cfg, "elbow.csv"), elbow_csv(report));
    write_text_file(out_path(cfg, "assignments.csv"),
                    assignments_csv(report, in.labels));

    json params;
    params["source"] = in.source;
    params["k_min"] = cfg.k_min;
    params["k_max"] = cfg.k_max;
    params["restarts"] = cfg.restarts;
    params["explicit_k"] =
        cfg.explicit_k ? json(*cfg.explicit_k) : json(nullptr);
    params["scaled"] = true;
    params["selected_k"] = report.selected_k;
    params["selection_rule"] = report.rule;
    params["low_confidence"] = report.low_confidence;
    write_manifest(cfg, "cluster", params, in.inputs,
                   {"elbow.csv", "assignments.csv"});
}

void cmd_regress(const RunConfig& cfg, const std::string& explicit_panel,
                 std::string ticker) {
    ensure_output_dir(cfg);
    std::string used;
    const AlignedPanel panel = load_stage_panel(cfg, explicit_panel, used);
    if (ticker.empty()) ticker = cfg.train_ticker;
    if (ticker.empty()) {
        const auto ts = panel.tickers();
        if (ts.empty()) throw ValidationError("panel has no ticker columns");
        ticker = ts[0];
    }
    const std::string target =
        cfg.target_column.empty()
            ? make_column_name(ticker, "adjusted_close")
            : resolve_feature_column(panel, cfg.target_column, ticker);

    const FeatureSpec spec = resolve_features(panel, cfg, ticker);
    FeatureMatrix fm = build_feature_matrix(panel, spec);
    const auto& target_col = panel.column(target);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < fm.rows.size(); ++i)
        if (is_defined(target_col[fm.rows[i]])) keep.push_back(i);
    Matrix X(keep.size(), fm.X.cols);
    std::vector<double> y;
    for (std::size_t i = 0; i < keep.size(); ++i) {
        for (std::size_t j = 0; j < fm.X.cols; ++j)
            X.at(i, j) = fm.X.at(keep[i], j);
        y.push_back(target_col[fm.rows[keep[i]]]);
    }

    const RegressionFit fit = fit_ols(X, y, fm.terms);
    write_text_file(out_path(cfg, "regression.txt"),
                    ols_table_text(fit, target));
    write_text_file(out_path(cfg, "regression.json"),
                    ols_fit_json(fit, target));

    json params = feature_parameters(cfg);
    params["ticker"] = ticker;
    params["target"] = target;
    params["rows_used"] = X.rows;
    params["rows_excluded"] = fm.excluded;
    write_manifest(cfg, "regress", params,
                   {{used, out_path(cfg, used).string()}},
                   {"regression.txt", "regression.json"});
}

void cmd_classify(const RunConfig& cfg, const std::string& explicit_panel,
                  std::string train, std::string test) {
    ensure_output_dir(cfg);
    const std::uint64_t seed = require_seed(cfg, "classify");
    std::string used;
    const AlignedPanel panel = load_stage_panel(cfg, explicit_panel, used);
    if (train.empty()) train = cfg.train_ticker;
    if (test.empty()) test = cfg.test_ticker;
    if (train.empty() || test.empty())
        throw UsageError("classify requires --train-ticker and --test-ticker "
                         "(or config train_ticker/test_ticker)");

    const std::string target_name = make_column_name(train, "target");
    if (!panel.has_column(target_name))
        throw ValidationError("panel lacks '" + target_name +
                              "'; run the label stage first");

    const FeatureSpec spec = resolve_features(panel, cfg, train);
    const FeatureMatrix fm = build_feature_matrix(panel, spec);
    const std::vector<double> y =
        gather_rows(panel.column(target_name), fm.rows);

    Matrix train_x = fm.X;
    std::vector<double> train_y = y;
    if (cfg.resample_mode != "none") {
        ResampleMode mode;
        if (cfg.resample_mode == "up")
            mode = ResampleMode::up;
        else if (cfg.resample_mode == "down")
            mode = ResampleMode::down;
        else
            throw UsageError("resample mode must be up, down, or none");
        SeededRng rng(mix_seed(seed, kResampleSalt));
        ResampleResult rs = resample(fm.X, y, mode, rng);
        train_x = std::move(rs.X);
        train_y = std::move(rs.y);
    }

    const StepwiseResult step =
        backward_stepwise_aic(train_x, train_y, fm.terms);
    const PruneResult pruned =
        pvalue_prune(step.X, train_y, step.terms, cfg.alpha);
    const LogisticFit& fit = pruned.fit;

    write_text_file(out_path(cfg, "logistic.txt"),
                    logistic_table_text(fit, target_name));
    write_text_file(out_path(cfg, "logistic.json"),
                    logistic_fit_json(fit, target_name));
    write_text_file(out_path(cfg, "stepwise.json"),
                    stepwise_log_json(step.removals, pruned.removed));

    // Train-side evaluation on the natural (unresampled) distribution.
    const FeatureSpec train_eval_spec = spec_from_terms(pruned.terms, "", "");
    const FeatureMatrix fm_train_eval =
        build_feature_matrix(panel, train_eval_spec);
    const std::vector<double> y_train_eval =
        gather_rows(panel.column(target_name), fm_train_eval.rows);
    const std::vector<double> p_train =
        logistic_predict(fm_train_eval.X, fit.coefficients);
    std::vector<int> labels_train(y_train_eval.size());
    std::vector<int> pred_train(p_train.size());
    for (std::size_t i = 0; i < p_train.size(); ++i) {
        labels_train[i] = y_train_eval[i] == 1.0 ? 1 : 0;
        pred_train[i] = p_train[i] >= kClassifyThreshold ? 1 : 0;
    }
    write_text_file(out_path(cfg, "metrics_train.json"),
                    metrics_json(classification_metrics(labels_train,
                                                        pred_train)));

    // Test-side evaluation with the surviving terms translated.
    const std::string test_target = make_column_name(test, "target");
    if (!panel.has_column(test_target))
        throw ValidationError("panel lacks '" + test_target +
                              "'; run the label stage first");
    const FeatureSpec test_spec = spec_from_terms(pruned.terms, train, test);
    const FeatureMatrix fm_test = build_feature_matrix(panel, test_spec);
    const std::vector<double> y_test =
        gather_rows(panel.column(test_target), fm_test.rows);
    const std::vector<double> p_test =
        logistic_predict(fm_test.X, fit.coefficients);
    std::vector<int> labels_test(y_test.size());
    std::vector<int> pred_test(p_test.size());
    for (std::size_t i = 0; i < p_test.size(); ++i) {
        labels_test[i] = y_test[i] == 1.0 ? 1 : 0;
        pred_test[i] = p_test[i] >= kClassifyThreshold ? 1 : 0;
    }
    write_text_file(out_path(cfg, "metrics_test.json"),
                    metrics_json(classification_metrics(labels_test,
                                                        pred_test)));
    write_text_file(out_path(cfg, "roc_test.csv"),
                    roc_csv(roc_auc(labels_test, p_test)));

    std::string probs = "date,probability\n";
    for (std::size_t i = 0; i < fm_test.rows.size(); ++i) {
        probs += panel.dates[fm_test.rows[i]].to_string();
        probs += ',';
        probs += format_double(p_test[i]);
        probs += '\n';
    }
    write_text_file(out_path(cfg, "probabilities.csv"), probs);

    json params = feature_parameters(cfg);
    params["train_ticker"] = train;
    params["test_ticker"] = test;
    params["resample"] = cfg.resample_mode;
    params["alpha"] = cfg.alpha;
    params["threshold"] = kClassifyThreshold;
    params["rows_excluded_train"] = fm.excluded;
    params["surviving_terms"] = pruned.terms;
    write_manifest(cfg, "classify", params,
                   {{used, out_path(cfg, used).string()}},
                   {"logistic.txt", "logistic.json", "stepwise.json",
                    "metrics_train.json", "metrics_test.json", "roc_test.csv",
                    "probabilities.csv"});
}

void cmd_backtest(const RunConfig& cfg, const std::string& explicit_panel,
                  std::string ticker, const std::string& probabilities_file) {
    ensure_output_dir(cfg);
    const std::uint64_t seed = require_seed(cfg, "backtest");
    if (!cfg.random_trade_probability)
        throw UsageError("backtest requires random_trade_probability (or "
                         "--trade-probability) for the random baseline");
    std::string used;
    const AlignedPanel panel = load_stage_panel(cfg, explicit_panel, used);
    if (ticker.empty()) ticker = cfg.test_ticker;
    if (ticker.empty())
        throw UsageError("backtest requires --ticker or config test_ticker");

    const std::string probs_name =
        probabilities_file.empty() ? "probabilities.csv" : probabilities_file;
    const fs::path probs_path = out_path(cfg, probs_name);
    const CsvDocument doc = read_csv(probs_path.string());
    if (doc.header != std::vector<std::string>{"date", "probability"})
        throw ParseError(probs_path.string() +
                         ": expected header 'date,probability'");
    std::vector<Date> dates;
    std::vector<double> probabilities;
    for (std::size_t i = 0; i < doc.rows.size(); ++i) {
        dates.push_back(Date::parse(doc.rows[i][0]));
        probabilities.push_back(parse_double_field(
            doc.rows[i][1], probs_name + " row " +
                               std::to_string(doc.line_numbers[i])));
    }

    const auto& price_col =
        panel.column(make_column_name(ticker, "adjusted_close"));
    std::vector<double> prices;
    std::size_t cursor = 0;
    for (const Date& d : dates) {
        while (cursor < panel.dates.size() && panel.dates[cursor] < d)
            ++cursor;
        if (cursor >= panel.dates.size() || !(panel.dates[cursor] == d))
            throw ValidationError("probability date " + d.to_string() +
                                  " not present in the panel");
        prices.push_back(price_col[cursor]);
    }

    const BacktestReport signal =
        run_signal_strategy(prices, probabilities, cfg.strategy, dates);
    const BacktestReport hold = run_buy_and_hold(prices, dates);
    SeededRng rng(mix_seed(seed, kRandomTraderSalt));
    const BacktestReport random =
        run_random_trader(prices, *cfg.random_trade_probability, rng,
                          cfg.strategy.cost_bps, dates);

    write_text_file(out_path(cfg, "backtest_signal.json"),
                    backtest_report_json(signal));
    write_text_file(out_path(cfg, "equity_signal.csv"), equity_csv(signal));
    write_text_file(out_path(cfg, "backtest_buy_and_hold.json"),
                    backtest_report_json(hold));
    write_text_file(out_path(cfg, "equity_buy_and_hold.csv"),
                    equity_csv(hold));
    write_text_file(out_path(cfg, "backtest_random.json"),
                    backtest_report_json(random));
    write_text_file(out_path(cfg, "equity_random.csv"), equity_csv(random));

    json params;
    params["ticker"] = ticker;
    params["exit_threshold"] = cfg.strategy.exit_threshold;
    params["reentry_threshold"] = cfg.strategy.reentry_threshold;
    params["cost_bps"] = cfg.strategy.cost_bps;
    params["random_trade_probability"] = *cfg.random_trade_probability;
    params["price_column"] = "adjusted_close";
    write_manifest(cfg, "backtest", params,
                   {{used, out_path(cfg, used).string()},
                    {probs_name, probs_path.string()}},
                   {"backtest_signal.json", "equity_signal.csv",
                    "backtest_buy_and_hold.json", "equity_buy_and_hold.csv",
                    "backtest_random.json", "equity_random.csv"});
}

void cmd_report(const RunConfig& cfg) {
    cmd_ingest(cfg);
    cmd_indicators(cfg);
    cmd_label(cfg, "", {});
    cmd_correlate(cfg, "", {});
    cmd_cluster(cfg);
    cmd_regress(cfg, "", "");
    cmd_classify(cfg, "", "", "");
    cmd_backtest(cfg, "", "", "");

    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(cfg.output_dir))
        if (entry.is_regular_file() &&
            entry.path().filename() != "report_manifest.json")
            names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    json m;
    m["command"] = "report";
    m["parameters"] = json::object();
    m["seed"] = cfg.seed ? json(*cfg.seed) : json(nullptr);
    m["inputs"] = json::object();
    json out = json::object();
    for (const auto& name : names)
        out[name] = content_hash(read_text_file(out_path(cfg, name).string()));
    m["outputs"] = out;
    write_text_file(out_path(cfg, "report_manifest.json"), m.dump(2) + "\n");
}

// ==========================================================================
// Entry point
// ==========================================================================

void emit_error(const std::string& command, const std::string& type,
                const std::string& message) {
    json e;
    e["command"] = command;
    e["type"] = type;
    e["error"] = message;
    std::cerr << e.dump() << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic stock-downturn analysis pipeline"};
    app.require_subcommand(1);

    struct Flags {
        std::string config;
        std::string data_dir;
        std::string output_dir;
        std::uint64_t seed = 0;
        std::vector<std::string> tickers;
        std::string base_url;
        std::string api_key;
        std::string panel;
        std::vector<std::string> columns;
        std::string train_ticker;
        std::string test_ticker;
        std::string resample_mode;
        double alpha = 0.05;
        std::string target_column;
        int trailing_years = 40;
        std::string matrix;
        std::string k_range;
        int restarts = 10;
        std::size_t explicit_k = 0;
        bool from_panel = false;
        double exit_threshold = 0.5;
        double reentry_threshold = 0.3;
        double cost_bps = 0.0;
        double trade_probability = 0.0;
        std::string probabilities;
        double min_depth = 0.05;
        double target_depth = 0.10;
        int lookahead = 0;
        std::vector<std::string> features;
        std::vector<std::string> interactions;
        std::string market_ticker;
    } f;

    std::map<std::string, CLI::App*> stages;
    for (const char* name :
         {"fetch", "ingest", "indicators", "label", "correlate", "cluster",
          "regress", "classify", "backtest", "report"}) {
        CLI::App* cmd = app.add_subcommand(name);
        cmd->add_option("--config", f.config, "JSON config file");
        cmd->add_option("--data-dir", f.data_dir, "input data directory");
        cmd->add_option("--output-dir", f.output_dir, "output directory");
        cmd->add_option("--seed", f.seed, "run seed");
        stages[name] = cmd;
    }
    stages["fetch"]->add_option("--ticker", f.tickers, "ticker symbol(s)");
    stages["fetch"]->add_option("--base-url", f.base_url, "provider base URL");
    stages["fetch"]->add_option("--api-key", f.api_key, "provider API key");
    stages["ingest"]->add_option("--ticker", f.tickers, "ticker symbol(s)");
    stages["ingest"]->add_option("--trailing-years", f.trailing_years,
                                 "trailing-year window, 0 disables");
    stages["indicators"]->add_option("--market-ticker", f.market_ticker,
                                     "benchmark ticker enabling beta");
    stages["label"]->add_option("--ticker", f.tickers, "ticker symbol(s)");
    stages["label"]->add_option("--panel", f.panel, "panel CSV to read");
    stages["label"]->add_option("--min-depth", f.min_depth,
                                "episode detection depth");
    stages["label"]->add_option("--target-depth", f.target_depth,
                                "target labeling depth");
    stages["label"]->add_option("--lookahead", f.lookahead,
                                "label this many days before each onset");
    stages["correlate"]->add_option("--panel", f.panel, "panel CSV to read");
    stages["correlate"]->add_option("--column", f.columns,
                                    "columns to correlate");
    stages["cluster"]->add_option("--matrix", f.matrix,
                                  "labeled feature matrix CSV");
    stages["cluster"]->add_option("--k-range", f.k_range, "k range, e.g. 2:10");
    stages["cluster"]->add_option("--restarts", f.restarts,
                                  "seeded restarts per k");
    stages["cluster"]->add_option("--k", f.explicit_k, "explicit k override");
    stages["cluster"]->add_flag("--from-panel", f.from_panel,
                                "vectorize the panel instead of a matrix CSV");
    stages["regress"]->add_option("--ticker", f.tickers, "ticker to fit");
    stages["regress"]->add_option("--panel", f.panel, "panel CSV to read");
    stages["regress"]->add_option("--target-column", f.target_column,
                                  "dependent variable column");
    stages["classify"]->add_option("--train-ticker", f.train_ticker,
                                   "ticker fitted on");
    stages["classify"]->add_option("--test-ticker", f.test_ticker,
                                   "ticker evaluated on");
    stages["classify"]->add_option("--panel", f.panel, "panel CSV to read");
    stages["classify"]->add_option("--resample", f.resample_mode,
                                   "up, down, or none");
    stages["classify"]->add_option("--alpha", f.alpha,
                                   "p-value pruning threshold");
    stages["classify"]->add_option("--feature", f.features,
                                   "feature base name(s), overriding config");
    stages["classify"]->add_option("--interaction", f.interactions,
                                   "interaction pair a:b");
    stages["backtest"]->add_option("--ticker", f.tickers, "ticker to trade");
    stages["backtest"]->add_option("--panel", f.panel, "panel CSV to read");
    stages["backtest"]->add_option("--probabilities", f.probabilities,
                                   "probability CSV from classify");
    stages["backtest"]->add_option("--exit-threshold", f.exit_threshold,
                                   "probability that exits to cash");
    stages["backtest"]->add_option("--reentry-threshold", f.reentry_threshold,
                                   "probability that re-enters");
    stages["backtest"]->add_option("--cost-bps", f.cost_bps,
                                   "per-trade cost in basis points");
    stages["backtest"]->add_option("--trade-probability", f.trade_probability,
                                   "random baseline daily flip probability");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    CLI::App* active = app.get_subcommands().front();
    const std::string stage = active->get_name();

    try {
        RunConfig cfg = load_config(f.config);
        const auto given = [&](const std::string& flag) {
            const CLI::Option* opt = active->get_option_no_throw(flag);
            return opt != nullptr && opt->count() > 0;
        };
        if (given("--data-dir")) {
            cfg.data_dir = f.data_dir;
            cfg.data_dir_display = f.data_dir;
        }
        if (given("--output-dir")) cfg.output_dir = f.output_dir;
        if (given("--seed")) cfg.seed = f.seed;
        if (given("--ticker") && (stage == "fetch" || stage == "ingest"))
            cfg.tickers = f.tickers;
        if (stage == "fetch") {
            if (given("--base-url")) cfg.provider.base_url = f.base_url;
            if (given("--api-key")) cfg.provider.api_key = f.api_key;
        }
        if (stage == "ingest" && given("--trailing-years"))
            cfg.trailing_years = f.trailing_years;
        if (stage == "indicators" && given("--market-ticker"))
            cfg.market_ticker = f.market_ticker;
        if (stage == "label") {
            if (given("--min-depth")) cfg.min_depth = f.min_depth;
            if (given("--target-depth")) cfg.target_depth = f.target_depth;
            if (given("--lookahead")) cfg.lookahead = f.lookahead;
        }
        if (stage == "cluster") {
            if (given("--matrix")) {
                cfg.cluster_matrix = f.matrix;
                cfg.cluster_matrix_display = f.matrix;
                cfg.cluster_from_panel = false;
            }
            if (given("--from-panel")) cfg.cluster_from_panel = true;
            if (given("--k-range")) {
                const std::size_t colon = f.k_range.find(':');
                if (colon == std::string::npos)
                    throw UsageError("--k-range expects min:max");
                cfg.k_min = static_cast<std::size_t>(
                    std::stoul(f.k_range.substr(0, colon)));
                cfg.k_max = static_cast<std::size_t>(
                    std::stoul(f.k_range.substr(colon + 1)));
            }
            if (given("--restarts")) cfg.restarts = f.restarts;
            if (given("--k")) cfg.explicit_k = f.explicit_k;
        }
        if (stage == "regress" && given("--target-column"))
            cfg.target_column = f.target_column;
        if (stage == "classify") {
            if (given("--resample")) cfg.resample_mode = f.resample_mode;
            if (given("--alpha")) cfg.alpha = f.alpha;
            if (given("--feature")) cfg.feature_bases = f.features;
            if (given("--interaction")) {
                cfg.feature_interactions.clear();
                for (const auto& pair : f.interactions) {
                    const std::size_t colon = pair.find(':');
                    if (colon == std::string::npos)
                        throw UsageError("--interaction expects a:b");
                    cfg.feature_interactions.emplace_back(
                        pair.substr(0, colon), pair.substr(colon + 1));
                }
            }
        }
        if (stage == "backtest") {
            if (given("--exit-threshold"))
                cfg.strategy.exit_threshold = f.exit_threshold;
            if (given("--reentry-threshold"))
                cfg.strategy.reentry_threshold = f.reentry_threshold;
            if (given("--cost-bps")) cfg.strategy.cost_bps = f.cost_bps;
            if (given("--trade-probability"))
                cfg.random_trade_probability = f.trade_probability;
        }

        if (stage == "fetch")
            cmd_fetch(cfg);
        else if (stage == "ingest")
            cmd_ingest(cfg);
        else if (stage == "indicators")
            cmd_indicators(cfg);
        else if (stage == "label")
            cmd_label(cfg, f.panel, given("--ticker") ? f.tickers
                                                      : std::vector<std::string>{});
        else if (stage == "correlate")
            cmd_correlate(cfg, f.panel,
                          given("--column") ? f.columns
                                            : std::vector<std::string>{});
        else if (stage == "cluster")
            cmd_cluster(cfg);
        else if (stage == "regress")
            cmd_regress(cfg, f.panel,
                        given("--ticker") && !f.tickers.empty() ? f.tickers[0]
                                                                : "");
        else if (stage == "classify")
            cmd_classify(cfg, f.panel, f.train_ticker, f.test_ticker);
        else if (stage == "backtest")
            cmd_backtest(cfg, f.panel,
                         given("--ticker") && !f.tickers.empty() ? f.tickers[0]
                                                                 : "",
                         f.probabilities);
        else if (stage == "report")
            cmd_report(cfg);
        return 0;
    } catch (const UsageError& e) {
        emit_error(stage, "usage", e.what());
        return 2;
    } catch (const NumericError& e) {
        emit_error(stage, "numeric", e.what());
        return 4;
    } catch (const ModelError& e) {
        emit_error(stage, "model", e.what());
        return 4;
    } catch (const ParseError& e) {
        emit_error(stage, "parse", e.what());
        return 3;
    } catch (const ValidationError& e) {
        emit_error(stage, "validation", e.what());
        return 3;
    } catch (const TransportError& e) {
        emit_error(stage, "transport", e.what());
        return 3;
    } catch (const ProviderError& e) {
        emit_error(stage, "provider", e.what());
        return 3;
    } catch (const DlabError& e) {
        emit_error(stage, "error", e.what());
        return 3;
    } catch (const std::exception& e) {
        emit_error(stage, "internal", e.what());
        return 3;
    }
}
