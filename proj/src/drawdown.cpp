#include "dlab/drawdown.hpp"

#include "dlab/csv.hpp"
#include "dlab/errors.hpp"

#include <algorithm>

namespace dlab {

std::string depth_class_name(DepthClass cls) {
    switch (cls) {
    case DepthClass::dip: return "dip";
    case DepthClass::pullback: return "pullback";
    case DepthClass::correction: return "correction";
    case DepthClass::crash: return "crash";
    }
    return "?";
}

DepthClass classify_depth(double depth) {
    if (depth >= 0.20) return DepthClass::crash;
    if (depth >= 0.10) return DepthClass::correction;
    if (depth >= 0.05) return DepthClass::pullback;
    return DepthClass::dip;
}

std::vector<DrawdownEpisode> detect_episodes(const std::vector<double>& prices,
                                             double min_depth) {
    if (prices.size() < 2)
        throw ValidationError("drawdown detection needs at least 2 prices");
    if (!(min_depth > 0.0 && min_depth < 1.0))
        throw ValidationError("min_depth must lie in (0, 1)");
    for (double p : prices)
        if (!(p > 0)) throw ValidationError("drawdown detection requires positive prices");

    std::vector<DrawdownEpisode> episodes;
    std::size_t peak = 0;
    bool open = false;
    DrawdownEpisode current;
    for (std::size_t i = 1; i < prices.size(); ++i) {
        if (!open) {
            if (prices[i] > prices[peak]) {
                peak = i;
            } else if (prices[i] <= prices[peak] * (1.0 - min_depth)) {
                current = DrawdownEpisode{};
                current.peak_index = peak;
                current.peak_price = prices[peak];
                current.trough_index = i;
                current.trough_price = prices[i];
                current.onset_index = i;
                open = true;
            }
        } else {
            if (prices[i] < current.trough_price) {
                current.trough_index = i;
                current.trough_price = prices[i];
            }
            if (prices[i] >= current.peak_price) {
                current.recovery_index = i;
                current.depth = (current.peak_price - current.trough_price) /
                                current.peak_price;
                current.duration_days = i - current.peak_index;
                current.cls = classify_depth(current.depth);
                episodes.push_back(current);
                peak = i;
                open = false;
            }
        }
    }
    if (open) {
        current.depth =
            (current.peak_price - current.trough_price) / current.peak_price;
        current.duration_days = prices.size() - 1 - current.peak_index;
        current.cls = classify_depth(current.depth);
        episodes.push_back(current);
    }
    return episodes;
}

std::vector<int> label_target(const std::vector<double>& prices,
                              double target_depth, int lookahead,
                              std::size_t min_duration) {
    if (!(target_depth > 0.0 && target_depth < 1.0))
        throw ValidationError("target_depth must lie in (0, 1)");
    if (lookahead < 0) throw ValidationError("lookahead must be >= 0");
    const auto episodes = detect_episodes(prices, target_depth);
    std::vector<int> labels(prices.size(), 0);
    for (const auto& ep : episodes) {
        if (ep.duration_days < min_duration) continue;
        const std::size_t onset = ep.onset_index;
        const std::size_t first =
            onset >= static_cast<std::size_t>(lookahead)
                ? onset - static_cast<std::size_t>(lookahead)
                : 0;
        for (std::size_t i = first; i <= onset; ++i) labels[i] = 1;
    }
    return labels;
}

double max_drawdown(const std::vector<double>& prices) {
    double peak = 0;
    double worst = 0;
    for (double p : prices) {
        peak = std::max(peak, p);
        if (peak > 0) worst = std::max(worst, (peak - p) / peak);
    }
    return worst;
}

std::string
serialize_episodes_csv(const std::vector<DrawdownEpisode>& episodes,
                       const std::vector<Date>& dates) {
    std::string out = "peak_date,trough_date,recovery_date,depth,class\n";
    for (const auto& ep : episodes) {
        out += dates[ep.peak_index].to_string();
        out += ',';
        out += dates[ep.trough_index].to_string();
        out += ',';
        if (ep.recovery_index) out += dates[*ep.recovery_index].to_string();
        out += ',';
        out += format_double(ep.depth);
        out += ',';
        out += depth_class_name(ep.cls);
        out += '\n';
    }
    return out;
}

} // namespace dlab
