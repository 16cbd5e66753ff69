#include "dlab/data.hpp"
#include "dlab/errors.hpp"
#include "dlab/indicators.hpp"
#include "dlab/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace dlab;

namespace {

std::vector<double> random_walk(std::uint64_t seed, std::size_t n,
                                double start = 100.0) {
    SeededRng rng(seed);
    std::vector<double> prices{start};
    while (prices.size() < n)
        prices.push_back(
            std::max(1.0, prices.back() * (1.0 + 0.02 * (rng.uniform() - 0.5))));
    return prices;
}

std::vector<double> ramp(std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i + 1);
    return v;
}

} // namespace

TEST_CASE("ema seeds with the simple average then smooths") {
    const std::vector<double> e = ema({1, 2, 3, 4, 5}, 3);
    REQUIRE(e.size() == 5);
    CHECK(!is_defined(e[0]));
    CHECK(!is_defined(e[1]));
    CHECK(e[2] == doctest::Approx(2.0).epsilon(1e-12)); // (1+2+3)/3
    CHECK(e[3] == doctest::Approx(3.0).epsilon(1e-12)); // 2 + (4-2)*1/2
    CHECK(e[4] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("ema rejects bad periods") {
    CHECK_THROWS_AS(ema({1, 2, 3}, 0), ValidationError);
    CHECK_THROWS_AS(ema({1, 2, 3}, -2), ValidationError);
}

TEST_CASE("rsi handles one-sided and flat paths") {
    std::vector<double> flat(20, 50.0);
    const std::vector<double> r_flat = rsi(flat, 14);
    CHECK(!is_defined(r_flat[13]));
    CHECK(r_flat[14] == 50.0); // no gains, no losses
    const std::vector<double> r_up = rsi(ramp(20), 14);
    CHECK(r_up[19] == 100.0); // never a loss
    std::vector<double> down;
    for (int i = 40; i > 20; --i) down.push_back(i);
    CHECK(rsi(down, 14)[19] == 0.0); // never a gain
}

TEST_CASE("rsi stays inside [0, 100] on random walks") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const auto prices = random_walk(seed, 1000);
        const auto r = rsi(prices, 14);
        REQUIRE(r.size() == prices.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i < 14)
                CHECK(!is_defined(r[i]));
            else {
                CHECK(r[i] >= 0.0);
                CHECK(r[i] <= 100.0);
            }
        }
    }
}

TEST_CASE("macd of a long ramp approaches the lag difference") {
    // EMAs of a linear ramp settle (period-1)/2 behind it, so the fast/slow
    // gap tends to (26-1)/2 - (12-1)/2 = 7.
    const MacdResult m = macd(ramp(600), 12, 26, 9);
    CHECK(m.macd.back() == doctest::Approx(7.0).epsilon(1e-9));
    CHECK(m.signal.back() == doctest::Approx(7.0).epsilon(1e-9));
    CHECK(std::fabs(m.hist.back()) < 1e-7);
    // defined exactly from the documented warm-ups
    CHECK(!is_defined(m.macd[24]));
    CHECK(is_defined(m.macd[25]));
    CHECK(!is_defined(m.signal[32]));
    CHECK(is_defined(m.signal[33]));
}

TEST_CASE("macd requires fast shorter than slow") {
    CHECK_THROWS_AS(macd(ramp(50), 26, 12, 9), ValidationError);
    CHECK_THROWS_AS(macd(ramp(50), 12, 12, 9), ValidationError);
}

TEST_CASE("macd histogram is exactly macd minus signal") {
    const auto prices = random_walk(77, 500);
    const MacdResult m = macd(prices, 12, 26, 9);
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (!is_defined(m.hist[i])) continue;
        CHECK(m.hist[i] == doctest::Approx(m.macd[i] - m.signal[i])
                               .epsilon(1e-12));
    }
}

TEST_CASE("obv accumulates signed volume") {
    const std::vector<double> o =
        obv({10, 11, 10.5, 10.5}, {100, 200, 150, 300});
    CHECK(o == std::vector<double>{0, 200, 50, 50});
    CHECK_THROWS_AS(obv({1, 2}, {1, 2, 3}), ValidationError);
}

TEST_CASE("obv ignores price level shifts") {
    const auto prices = random_walk(5, 300);
    const auto volumes = random_walk(6, 300, 1000.0);
    std::vector<double> shifted = prices;
    for (double& p : shifted) p += 1000.0;
    CHECK(obv(prices, volumes) == obv(shifted, volumes));
}

TEST_CASE("bollinger uses the population deviation") {
    const BollingerResult b = bollinger({1, 2, 3}, 3, 2.0);
    const double sigma = std::sqrt(2.0 / 3.0);
    CHECK(b.middle[2] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(b.upper[2] == doctest::Approx(2.0 + 2.0 * sigma).epsilon(1e-12));
    CHECK(b.lower[2] == doctest::Approx(2.0 - 2.0 * sigma).epsilon(1e-12));
    CHECK(!is_defined(b.middle[1]));
}

TEST_CASE("rolling std uses the sample deviation") {
    const std::vector<double> s = rolling_std({1, 2, 3}, 3);
    CHECK(!is_defined(s[1]));
    CHECK(s[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("simple returns divide consecutive prices") {
    const std::vector<double> r = simple_returns({100, 50, 100});
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(r[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(simple_returns({100, 0, 100}), ValidationError);
    CHECK_THROWS_AS(simple_returns({100, -5, 100}), ValidationError);
}

TEST_CASE("rolling beta recovers a linear exposure") {
    const auto market = random_walk(9, 400);
    std::vector<double> scaled;
    for (double m : market) scaled.push_back(2.0 * m + 3.0);
    const std::vector<double> b = rolling_beta(scaled, market, 252);
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (i < 251)
            CHECK(!is_defined(b[i]));
        else
            CHECK(b[i] == doctest::Approx(2.0).epsilon(1e-9));
    }
}

TEST_CASE("rolling beta is undefined on a flat market window") {
    std::vector<double> market(300, 10.0);
    const auto asset = random_walk(11, 300);
    const std::vector<double> b = rolling_beta(asset, market, 252);
    for (double v : b) CHECK(!is_defined(v));
}

TEST_CASE("fundamental ratios handle zero denominators explicitly") {
    FundamentalsRecord rec;
    rec.eps = 5.0;
    rec.earnings_growth_rate = 0.10;
    rec.book_value_per_share = 50.0;
    rec.dividends_per_share = 2.0;
    const RatioSet r = fundamental_ratios(100.0, rec);
    CHECK(r.pe.value() == doctest::Approx(20.0));
    CHECK(r.peg.value() == doctest::Approx(2.0)); // 20 / (0.10 * 100)
    CHECK(r.pb.value() == doctest::Approx(2.0));
    CHECK(r.dpr.value() == doctest::Approx(0.4));
    CHECK(r.dividend_yield.value() == doctest::Approx(0.02));

    rec.eps = 0.0;
    const RatioSet zero_eps = fundamental_ratios(100.0, rec);
    CHECK(!zero_eps.pe.has_value());
    CHECK(!zero_eps.peg.has_value());
    CHECK(!zero_eps.dpr.has_value());
    CHECK(zero_eps.pb.has_value());

    rec.eps = 5.0;
    rec.earnings_growth_rate = 0.0;
    const RatioSet zero_growth = fundamental_ratios(100.0, rec);
    CHECK(zero_growth.pe.has_value());
    CHECK(!zero_growth.peg.has_value());

    rec.book_value_per_share = 0.0;
    CHECK(!fundamental_ratios(100.0, rec).pb.has_value());
    CHECK_THROWS_AS(fundamental_ratios(0.0, rec), ValidationError);
}

TEST_CASE("indicator bundle stays aligned to its input") {
    const auto prices = random_walk(21, 300);
    const auto volumes = random_walk(22, 300, 5000.0);
    const IndicatorSet set = compute_indicators(prices, volumes, {}, prices);
    for (const auto* col :
         {&set.rsi, &set.macd, &set.macd_signal, &set.macd_hist, &set.obv,
          &set.bb_upper, &set.bb_middle, &set.bb_lower, &set.rolling_std,
          &set.simple_return, &set.beta})
        CHECK(col->size() == prices.size());
    CHECK(!is_defined(set.simple_return[0]));
    const auto returns = simple_returns(prices);
    for (std::size_t i = 1; i < prices.size(); ++i)
        CHECK(set.simple_return[i] == returns[i - 1]);
    // beta of a series against itself is 1
    for (std::size_t i = 252; i < prices.size(); ++i)
        CHECK(set.beta[i] == doctest::Approx(1.0).epsilon(1e-9));
    const IndicatorSet no_market = compute_indicators(prices, volumes);
    CHECK(no_market.beta.empty());
}
