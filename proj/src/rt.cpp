#include "epimob/rt.hpp"

#include <algorithm>
#include <cmath>

#include "epimob/error.hpp"

namespace epimob {

RtSeries wallinga_teunis(const DailySeries& cases, const GenerationInterval& gi) {
    const auto& c = cases.values;
    const int n = int(c.size());
    // Effective support: trailing zero-weight lags neither transmit nor censor.
    int L = gi.max_lag();
    while (L > 1 && gi.w(L) == 0.0) --L;

    for (double v : c) {
        if (v < 0 || !std::isfinite(v)) {
            throw input_error("cases for region '" + cases.region_id +
                              "' contain negative or non-finite values");
        }
    }
    bool any_case = std::any_of(c.begin(), c.end(), [](double v) { return v > 0; });

    RtSeries out;
    out.region_id = cases.region_id;
    out.start = cases.start;
    if (!any_case) {
        return out; // empty series
    }
    if (n <= L) {
        throw input_error("cases for region '" + cases.region_id +
                          "' are shorter than the generation-interval support");
    }

    // denom[j] = sum_k c[k] * w(j-k): total infection pressure on day j.
    std::vector<double> denom(size_t(n), 0.0);
    for (int j = 0; j < n; ++j) {
        double d = 0.0;
        for (int s = 1; s <= L && s <= j; ++s) {
            d += c[size_t(j - s)] * gi.w(s);
        }
        denom[size_t(j)] = d;
    }

    out.daily.assign(size_t(n), std::nullopt);
    out.censored.assign(size_t(n), false);
    for (int t = 0; t < n; ++t) {
        if (!(c[size_t(t)] > 0)) continue;
        // cases[t] cancels between p(t->j) and the division by cases[t],
        // which also gives scale invariance in the case counts.
        double r = 0.0;
        for (int s = 1; s <= L && t + s < n; ++s) {
            int j = t + s;
            if (denom[size_t(j)] > 0 && c[size_t(j)] > 0) {
                r += gi.w(s) * c[size_t(j)] / denom[size_t(j)];
            }
        }
        out.daily[size_t(t)] = r;
        out.censored[size_t(t)] = (t + L >= n);
    }
    return out;
}

WeeklyRt weekly_average(const RtSeries& rt) {
    bool any = std::any_of(rt.daily.begin(), rt.daily.end(),
                           [](const auto& v) { return v.has_value(); });
    if (!any) {
        throw input_error("weekly_average: series for region '" + rt.region_id +
                          "' has no defined daily value");
    }

    WeeklyRt out;
    out.series.region_id = rt.region_id;
    size_t i = 0;
    while (i < rt.daily.size()) {
        IsoWeek week = iso_week_of(rt.start.plus_days(int64_t(i)));
        double sum = 0.0;
        int count = 0;
        bool censored = false;
        size_t j = i;
        for (; j < rt.daily.size(); ++j) {
            if (iso_week_of(rt.start.plus_days(int64_t(j))) != week) break;
            if (rt.daily[j].has_value()) {
                sum += *rt.daily[j];
                ++count;
                censored = censored || rt.censored[j];
            }
        }
        if (count > 0) {
            out.series.push(week, sum / count);
            out.censored.push_back(censored);
        }
        i = j;
    }
    return out;
}

OnsetRecord onset_day(const DailySeries& cases, double threshold) {
    const Date anchor{2020, 1, 1};
    if (cases.start < anchor) {
        throw input_error("onset_day: series for region '" + cases.region_id +
                          "' starts before 2020-01-01");
    }
    OnsetRecord rec;
    rec.region_id = cases.region_id;
    double cum = 0.0;
    for (size_t i = 0; i < cases.values.size(); ++i) {
        cum += cases.values[i];
        if (cum >= threshold) {
            rec.onset_day = int(cases.date_at(i).serial() - anchor.serial());
            rec.reached = true;
            return rec;
        }
    }
    return rec;
}

std::map<std::string, Date> first_case_dates(const std::map<std::string, DailySeries>& cases) {
    std::map<std::string, Date> out;
    for (const auto& [id, s] : cases) {
        for (size_t i = 0; i < s.values.size(); ++i) {
            if (s.values[i] > 0) {
                out.emplace(id, s.date_at(i));
                break;
            }
        }
    }
    return out;
}

AlignedMatrix align_by_onset(const std::map<std::string, RtSeries>& series,
                             const std::map<std::string, Date>& anchors,
                             int window_days) {
    if (window_days <= 0) {
        throw input_error("align_by_onset: window_days must be positive");
    }
    AlignedMatrix out;
    for (const auto& [id, rt] : series) {
        auto it = anchors.find(id);
        if (it == anchors.end()) {
            out.dropped.push_back(id);
            continue;
        }
        auto row = std::vector<std::optional<double>>(size_t(window_days));
        int64_t anchor_off = it->second.serial() - rt.start.serial();
        for (int d = 0; d < window_days; ++d) {
            int64_t idx = anchor_off + d;
            if (idx >= 0 && idx < int64_t(rt.daily.size())) {
                row[size_t(d)] = rt.daily[size_t(idx)];
            }
        }
        out.region_ids.push_back(id);
        out.rows.push_back(std::move(row));
    }
    return out;
}

} // namespace epimob
