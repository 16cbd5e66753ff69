#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "dlab/fetch.hpp"

#include "dlab/csv.hpp"
#include "dlab/errors.hpp"
#include "dlab/ingest.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace dlab {

namespace {

using nlohmann::json;

double field_as_double(const json& entry, const char* key,
                       const std::string& context) {
    if (!entry.contains(key))
        throw ParseError(context + ": missing field '" + key + "'");
    const json& v = entry[key];
    if (v.is_number()) return v.get<double>();
    if (v.is_string())
        return parse_double_field(v.get<std::string>(),
                                  context + ", field " + key);
    throw ParseError(context + ": field '" + key +
                     "' is neither number nor string");
}

} // namespace

TickerSeries parse_provider_daily_json(const std::string& body,
                                       const std::string& ticker) {
    json payload;
    try {
        payload = json::parse(body);
    } catch (const json::exception& e) {
        throw ParseError("provider payload is not valid JSON: " +
                         std::string(e.what()));
    }
    if (payload.contains("Error Message"))
        throw ProviderError("provider error: " +
                            payload["Error Message"].dump());
    if (payload.contains("Note"))
        throw ProviderError("provider notice: " + payload["Note"].dump());
    if (!payload.contains("Time Series (Daily)"))
        throw ParseError("provider payload lacks 'Time Series (Daily)'");
    const json& series = payload["Time Series (Daily)"];
    if (!series.is_object())
        throw ParseError("'Time Series (Daily)' is not an object");

    TickerSeries out;
    out.ticker = ticker;
    for (const auto& [date_text, entry] : series.items()) {
        const std::string context = ticker + " " + date_text;
        Bar bar;
        bar.date = Date::parse(date_text);
        bar.open = field_as_double(entry, "1. open", context);
        bar.high = field_as_double(entry, "2. high", context);
        bar.low = field_as_double(entry, "3. low", context);
        bar.close = field_as_double(entry, "4. close", context);
        bar.adjusted_close =
            field_as_double(entry, "5. adjusted close", context);
        bar.volume = field_as_double(entry, "6. volume", context);
        out.bars.push_back(bar);
    }
    std::sort(out.bars.begin(), out.bars.end(),
              [](const Bar& a, const Bar& b) { return a.date < b.date; });
    validate_ticker_series(out, "provider payload for " + ticker);
    for (std::size_t i = 0; i < out.bars.size(); ++i)
        validate_bar(out.bars[i], "provider payload for " + ticker,
                     static_cast<int>(i + 1));
    return out;
}

std::string provider_query_url(const ProviderConfig& config,
                               const std::string& ticker,
                               const std::string& api_key) {
    return config.base_url +
           "/query?function=TIME_SERIES_DAILY_ADJUSTED&symbol=" + ticker +
           "&outputsize=full&apikey=" + api_key;
}

HttpGet default_http_transport() {
    return [](const std::string& url) -> HttpResponse {
        const std::size_t scheme_end = url.find("://");
        if (scheme_end == std::string::npos)
            throw TransportError("URL lacks a scheme: " + url);
        const std::size_t path_start = url.find('/', scheme_end + 3);
        const std::string origin =
            path_start == std::string::npos ? url : url.substr(0, path_start);
        const std::string path =
            path_start == std::string::npos ? "/" : url.substr(path_start);
        httplib::Client client(origin);
        client.set_connection_timeout(10);
        client.set_read_timeout(30);
        auto result = client.Get(path);
        if (!result)
            throw TransportError("HTTP request failed: " +
                                 httplib::to_string(result.error()));
        return HttpResponse{result->status, result->body};
    };
}

ProviderClient::ProviderClient(ProviderConfig config)
    : ProviderClient(std::move(config), default_http_transport(),
                     [](std::chrono::milliseconds d) {
                         std::this_thread::sleep_for(d);
                     },
                     [] { return std::chrono::steady_clock::now(); }) {}

ProviderClient::ProviderClient(ProviderConfig config, HttpGet transport,
                               Sleeper sleeper, Clock clock)
    : config_(std::move(config)), transport_(std::move(transport)),
      sleeper_(std::move(sleeper)), clock_(std::move(clock)) {
    if (config_.requests_per_minute < 1)
        throw ValidationError("requests_per_minute must be >= 1");
}

std::string ProviderClient::resolve_api_key() const {
    if (!config_.api_key.empty()) return config_.api_key;
    if (const char* env = std::getenv("DLAB_API_KEY"); env && *env)
        return env;
    throw ValidationError(
        "no API key: set provider.api_key or the DLAB_API_KEY environment variable");
}

void ProviderClient::wait_for_budget() {
    const auto minute = std::chrono::minutes(1);
    auto now = clock_();
    while (!request_times_.empty() && now - request_times_.front() >= minute)
        request_times_.pop_front();
    if (request_times_.size() >=
        static_cast<std::size_t>(config_.requests_per_minute)) {
        const auto wait = std::chrono::duration_cast<std::chrono::milliseconds>(
            request_times_.front() + minute - now);
        if (wait.count() > 0) sleeper_(wait);
        now = clock_();
        while (!request_times_.empty() &&
               now - request_times_.front() >= minute)
            request_times_.pop_front();
    }
    request_times_.push_back(clock_());
}

TickerSeries ProviderClient::fetch_remote_daily(const std::string& ticker) {
    if (ticker.empty() || ticker.find('.') != std::string::npos)
        throw ValidationError("invalid ticker symbol '" + ticker + "'");
    const std::string url =
        provider_query_url(config_, ticker, resolve_api_key());

    std::lock_guard<std::mutex> lock(mutex_);
    int attempts_left = config_.max_retries;
    while (true) {
        wait_for_budget();
        const HttpResponse response = transport_(url);
        if (response.status == 429) {
            if (attempts_left-- > 0) {
                sleeper_(std::chrono::milliseconds(
                    60000 / config_.requests_per_minute));
                continue;
            }
            throw TransportError(
                "rate limited (HTTP 429) and retry budget exhausted for " +
                ticker);
        }
        if (response.status != 200)
            throw TransportError("HTTP " + std::to_string(response.status) +
                                 " fetching " + ticker);
        return parse_provider_daily_json(response.body, ticker);
    }
}

} // namespace dlab
