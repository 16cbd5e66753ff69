#include "dlab/dates.hpp"
#include "dlab/drawdown.hpp"
#include "dlab/errors.hpp"
#include "dlab/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace dlab;

namespace {

std::vector<double> random_walk(std::uint64_t seed, std::size_t n) {
    SeededRng rng(seed);
    std::vector<double> prices{100.0};
    while (prices.size() < n)
        prices.push_back(
            std::max(1.0, prices.back() * (1.0 + 0.03 * (rng.uniform() - 0.5))));
    return prices;
}

} // namespace

TEST_CASE("the five-point path yields one recovered correction") {
    const std::vector<double> prices = {100, 95, 89, 94, 101};
    const auto episodes = detect_episodes(prices, 0.05);
    REQUIRE(episodes.size() == 1);
    const DrawdownEpisode& e = episodes[0];
    CHECK(e.peak_index == 0);
    CHECK(e.peak_price == 100.0);
    CHECK(e.trough_index == 2);
    CHECK(e.trough_price == 89.0);
    CHECK(e.onset_index == 1); // 95 touches the 5% threshold exactly
    REQUIRE(e.recovery_index.has_value());
    CHECK(*e.recovery_index == 4);
    CHECK(e.depth == 0.11); // (100-89)/100 is exact in binary
    CHECK(e.cls == DepthClass::correction);
}

TEST_CASE("episode csv serialization matches the hand walk") {
    const std::vector<double> prices = {100, 95, 89, 94, 101};
    std::vector<Date> dates;
    for (const char* s :
         {"2020-01-02", "2020-01-03", "2020-01-06", "2020-01-07", "2020-01-08"})
        dates.push_back(Date::parse(s));
    CHECK(serialize_episodes_csv(detect_episodes(prices, 0.05), dates) ==
          "peak_date,trough_date,recovery_date,depth,class\n"
          "2020-01-02,2020-01-06,2020-01-08,0.11,correction\n");
}

TEST_CASE("labels mark the onset and the lookahead window") {
    const std::vector<double> prices = {100, 95, 89, 94, 101};
    CHECK(label_target(prices, 0.10, 0) == std::vector<int>{0, 0, 1, 0, 0});
    CHECK(label_target(prices, 0.10, 2) == std::vector<int>{1, 1, 1, 0, 0});
    // lookahead clamps at the series start
    CHECK(label_target(prices, 0.10, 9) == std::vector<int>{1, 1, 1, 0, 0});
    // shallower threshold moves the onset to the 5% touch
    CHECK(label_target(prices, 0.05, 0) == std::vector<int>{0, 1, 0, 0, 0});
}

TEST_CASE("a twenty-one percent drop classifies as a crash") {
    const auto episodes = detect_episodes({100, 79, 100}, 0.05);
    REQUIRE(episodes.size() == 1);
    CHECK(episodes[0].depth == doctest::Approx(0.21).epsilon(1e-15));
    CHECK(episodes[0].cls == DepthClass::crash);
    CHECK(depth_class_name(episodes[0].cls) == "crash");
}

TEST_CASE("depth classes split at the documented bands") {
    CHECK(classify_depth(0.049) == DepthClass::dip);
    CHECK(classify_depth(0.05) == DepthClass::pullback);
    CHECK(classify_depth(0.0999) == DepthClass::pullback);
    CHECK(classify_depth(0.10) == DepthClass::correction);
    CHECK(classify_depth(0.1999) == DepthClass::correction);
    CHECK(classify_depth(0.20) == DepthClass::crash);
    CHECK(classify_depth(0.55) == DepthClass::crash);
    CHECK(depth_class_name(DepthClass::dip) == "dip");
    CHECK(depth_class_name(DepthClass::pullback) == "pullback");
    CHECK(depth_class_name(DepthClass::correction) == "correction");
}

TEST_CASE("an unrecovered tail episode is kept without a recovery date") {
    const auto episodes = detect_episodes({100, 90, 80}, 0.05);
    REQUIRE(episodes.size() == 1);
    CHECK(!episodes[0].recovery_index.has_value());
    CHECK(episodes[0].trough_index == 2);
    const std::string csv = serialize_episodes_csv(
        episodes, {Date::parse("2020-01-02"), Date::parse("2020-01-03"),
                   Date::parse("2020-01-06")});
    CHECK(csv == "peak_date,trough_date,recovery_date,depth,class\n"
                 "2020-01-02,2020-01-06,,0.2,crash\n");
}

TEST_CASE("a new peak resets the scan after recovery") {
    // two distinct episodes separated by a full recovery
    const std::vector<double> prices = {100, 90, 101, 102, 90, 103};
    const auto episodes = detect_episodes(prices, 0.05);
    REQUIRE(episodes.size() == 2);
    CHECK(episodes[0].peak_index == 0);
    CHECK(*episodes[0].recovery_index == 2);
    CHECK(episodes[1].peak_index == 3);
    CHECK(*episodes[1].recovery_index == 5);
}

TEST_CASE("episodes never overlap and depths respect the threshold") {
    for (std::uint64_t seed : {10ULL, 11ULL, 12ULL, 13ULL, 14ULL}) {
        const auto prices = random_walk(seed, 1500);
        const auto episodes = detect_episodes(prices, 0.05);
        for (std::size_t i = 0; i < episodes.size(); ++i) {
            const auto& e = episodes[i];
            CHECK(e.depth >= 0.05);
            CHECK(e.peak_index <= e.onset_index);
            CHECK(e.onset_index <= e.trough_index);
            CHECK(e.trough_price <= e.peak_price);
            if (e.recovery_index) {
                CHECK(e.trough_index < *e.recovery_index);
                CHECK(prices[*e.recovery_index] >= e.peak_price);
            }
            if (i > 0) {
                REQUIRE(episodes[i - 1].recovery_index.has_value());
                CHECK(e.peak_index >= *episodes[i - 1].recovery_index);
            }
        }
    }
}

TEST_CASE("episode detection is scale invariant") {
    const auto prices = random_walk(42, 800);
    std::vector<double> scaled;
    for (double p : prices) scaled.push_back(3.5 * p);
    const auto a = detect_episodes(prices, 0.05);
    const auto b = detect_episodes(scaled, 0.05);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].peak_index == b[i].peak_index);
        CHECK(a[i].trough_index == b[i].trough_index);
        CHECK(a[i].onset_index == b[i].onset_index);
        CHECK(a[i].recovery_index == b[i].recovery_index);
        CHECK(a[i].depth == doctest::Approx(b[i].depth).epsilon(1e-12));
    }
}

TEST_CASE("raising the detection threshold only removes episodes") {
    for (std::uint64_t seed : {21ULL, 22ULL, 23ULL}) {
        const auto prices = random_walk(seed, 1200);
        std::size_t prev = detect_episodes(prices, 0.02).size();
        for (double depth : {0.05, 0.10, 0.20}) {
            const std::size_t count = detect_episodes(prices, depth).size();
            CHECK(count <= prev);
            prev = count;
        }
    }
}

TEST_CASE("minimum duration filters labels but not detection") {
    // fast dip: peak 0, onset/trough 1, recovery 2 (duration 2 days)
    const std::vector<double> prices = {100, 85, 101, 102};
    CHECK(label_target(prices, 0.10, 0, 0) == std::vector<int>{0, 1, 0, 0});
    CHECK(label_target(prices, 0.10, 0, 10) == std::vector<int>{0, 0, 0, 0});
}

TEST_CASE("max drawdown scans the running peak") {
    CHECK(max_drawdown({100, 150}) == 0.0);
    CHECK(max_drawdown({100, 80, 120}) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(max_drawdown({1.0, 1.5, 0.75, 2.0}) ==
          doctest::Approx(0.5).epsilon(1e-15));
    CHECK(max_drawdown({}) == 0.0);
    CHECK(max_drawdown({5.0}) == 0.0);
}

TEST_CASE("detection validates prices and thresholds") {
    CHECK_THROWS_AS(detect_episodes({100, -5, 100}, 0.05), ValidationError);
    CHECK_THROWS_AS(detect_episodes({100, 90}, 0.0), ValidationError);
    CHECK_THROWS_AS(detect_episodes({100, 90}, 1.0), ValidationError);
    CHECK_THROWS_AS(detect_episodes({100}, 0.05), ValidationError);
}
