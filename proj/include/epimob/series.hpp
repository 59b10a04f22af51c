#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epimob/calendar.hpp"
#include "epimob/region.hpp"

namespace epimob {

/// Contiguous daily series (no date gaps; loaders zero-fill).
struct DailySeries {
    std::string region_id;
    Date start;
    std::vector<double> values;

    Date date_at(size_t i) const { return start.plus_days(int64_t(i)); }

    /// Index of a date inside the span, or nullopt.
    std::optional<size_t> index_of(const Date& d) const {
        int64_t off = d.serial() - start.serial();
        if (off < 0 || off >= int64_t(values.size())) return std::nullopt;
        return size_t(off);
    }
};

/// Sparse weekly series: strictly increasing ISO weeks, one value each.
/// Missing weeks stay absent.
struct WeeklySeries {
    std::string region_id;
    std::vector<IsoWeek> weeks;
    std::vector<double> values;

    size_t size() const { return weeks.size(); }

    std::optional<double> at(const IsoWeek& w) const;

    /// Appends, enforcing the strictly-increasing invariant.
    void push(const IsoWeek& w, double v);
};

/// Shared container for one analysis dataset.
struct EpiPanel {
    Registry regions;
    std::map<std::string, DailySeries> cases;
    std::map<std::string, WeeklySeries> deaths;
    // region -> {internal, inbound, outbound}
    std::map<std::string, std::array<WeeklySeries, 3>> mobility;
};

} // namespace epimob
