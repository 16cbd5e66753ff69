// drawdown.hpp
//
// Peak/trough/recovery segmentation of a price path, depth classification,
// and the binary downturn target derived from episode onsets.
#pragma once

#include "dlab/dates.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace dlab {

// Depth bands: pullback 5-10%, correction 10-20%, crash over 20%. `dip`
// covers episodes below 5%, reachable only when detection runs with
// min_depth under 0.05.
enum class DepthClass { dip, pullback, correction, crash };

std::string depth_class_name(DepthClass cls);
DepthClass classify_depth(double depth);

struct DrawdownEpisode {
    std::size_t peak_index = 0;
    double peak_price = 0;
    std::size_t trough_index = 0;
    double trough_price = 0;
    // First day at or below the opening threshold peak*(1 - min_depth).
    std::size_t onset_index = 0;
    // Absent when the series ends before regaining the peak.
    std::optional<std::size_t> recovery_index;
    double depth = 0; // (peak - trough)/peak
    std::size_t duration_days = 0; // trading days peak to recovery or end
    DepthClass cls = DepthClass::dip;
};

// Running-maximum scan: an episode opens when price first falls to or below
// peak*(1 - min_depth), its trough is the minimum before the price regains
// the peak, and the running maximum resets at recovery. A trailing
// unrecovered episode is kept with recovery absent.
std::vector<DrawdownEpisode> detect_episodes(const std::vector<double>& prices,
                                             double min_depth = 0.05);

// 1 on the onset day of every episode of depth >= target_depth (and duration
// >= min_duration); with lookahead H, also 1 on the H trading days before
// each onset. 0 elsewhere.
std::vector<int> label_target(const std::vector<double>& prices,
                              double target_depth = 0.10, int lookahead = 0,
                              std::size_t min_duration = 0);

// Deepest peak-to-trough decline of the path; 0 for a non-decreasing path.
double max_drawdown(const std::vector<double>& prices);

// Episode table: header peak_date,trough_date,recovery_date,depth,class.
// `dates` supplies the date axis for the indices; recovery_date is empty for
// unrecovered episodes.
std::string
serialize_episodes_csv(const std::vector<DrawdownEpisode>& episodes,
                       const std::vector<Date>& dates);

} // namespace dlab
