// fetch.hpp
//
// HTTP client for an Alpha-Vantage-compatible daily-adjusted endpoint, with
// a shared request budget and injectable transport/clock for tests.
#pragma once

#include "dlab/data.hpp"

#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <string>

namespace dlab {

struct ProviderConfig {
    std::string base_url;
    std::string api_key; // falls back to the DLAB_API_KEY environment variable
    int requests_per_minute = 5;
    int max_retries = 3; // extra attempts after an HTTP 429
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

using HttpGet = std::function<HttpResponse(const std::string& url)>;
using Sleeper = std::function<void(std::chrono::milliseconds)>;
using Clock = std::function<std::chrono::steady_clock::time_point()>;

// Parses the provider's daily-adjusted JSON payload ("Time Series (Daily)"
// map). A "Note" or "Error Message" body raises ProviderError; structural
// problems raise ParseError.
TickerSeries parse_provider_daily_json(const std::string& body,
                                       const std::string& ticker);

std::string provider_query_url(const ProviderConfig& config,
                               const std::string& ticker,
                               const std::string& api_key);

class ProviderClient {
  public:
    explicit ProviderClient(ProviderConfig config);
    ProviderClient(ProviderConfig config, HttpGet transport, Sleeper sleeper,
                   Clock clock);

    // GET {base_url}/query?function=TIME_SERIES_DAILY_ADJUSTED&symbol={T}
    // &outputsize=full&apikey={K}, delayed as needed to respect the request
    // budget; HTTP 429 is retried max_retries times before TransportError.
    TickerSeries fetch_remote_daily(const std::string& ticker);

  private:
    std::string resolve_api_key() const;
    void wait_for_budget();

    ProviderConfig config_;
    HttpGet transport_;
    Sleeper sleeper_;
    Clock clock_;
    std::mutex mutex_;
    std::deque<std::chrono::steady_clock::time_point> request_times_;
};

// The process-default transport (cpp-httplib).
HttpGet default_http_transport();

} // namespace dlab
