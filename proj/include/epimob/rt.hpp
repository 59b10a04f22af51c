#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epimob/calendar.hpp"
#include "epimob/gentime.hpp"
#include "epimob/series.hpp"

namespace epimob {

/// Daily reproduction-number estimates. Values are absent on days with no
/// cases; the final max_lag days are emitted but flagged right-censored
/// (their infectee window is truncated by the series end).
struct RtSeries {
    std::string region_id;
    Date start;
    std::vector<std::optional<double>> daily;
    std::vector<bool> censored;
};

/// Weekly mean of the defined daily values, plus a per-week flag marking
/// weeks that contain any right-censored day.
struct WeeklyRt {
    WeeklySeries series;
    std::vector<bool> censored;
};

struct OnsetRecord {
    std::string region_id;
    int onset_day = 0; // days since 2020-01-01; meaningful iff reached
    bool reached = false;
};

/// Values realigned so index 0 is each region's first recorded case.
struct AlignedMatrix {
    std::vector<std::string> region_ids;
    std::vector<std::vector<std::optional<double>>> rows; // one per region, width window_days
    std::vector<std::string> dropped;                     // regions without an anchor
};

/// Case-pair attribution estimator: the relative likelihood that a case on
/// day j was infected by a case on day t is
///   p(t->j) = cases[t] * w(j-t) / sum_k cases[k] * w(j-k),
/// and Rt(t) = sum_{j>t} p(t->j) * cases[j] / cases[t]. Days j whose
/// denominator is zero contribute nothing. All-zero input yields an empty
/// series.
RtSeries wallinga_teunis(const DailySeries& cases, const GenerationInterval& gi);

/// Per ISO week, the mean over DEFINED daily values; weeks without any
/// defined value are absent. Requires at least one defined daily value.
WeeklyRt weekly_average(const RtSeries& rt);

/// Days from 2020-01-01 until cumulative cases first reach `threshold`.
OnsetRecord onset_day(const DailySeries& cases, double threshold = 20);

/// First day with cases > 0 per region; regions with no case are omitted.
std::map<std::string, Date> first_case_dates(const std::map<std::string, DailySeries>& cases);

/// Reindexes each series so day 0 is the region's anchor date, truncated to
/// window_days. Series whose region has no anchor are dropped and recorded.
AlignedMatrix align_by_onset(const std::map<std::string, RtSeries>& series,
                             const std::map<std::string, Date>& anchors,
                             int window_days);

} // namespace epimob
