#include "epimob/series.hpp"

#include <algorithm>

#include "epimob/error.hpp"

namespace epimob {

std::optional<double> WeeklySeries::at(const IsoWeek& w) const {
    auto it = std::lower_bound(weeks.begin(), weeks.end(), w);
    if (it == weeks.end() || *it != w) return std::nullopt;
    return values[size_t(it - weeks.begin())];
}

void WeeklySeries::push(const IsoWeek& w, double v) {
    if (!weeks.empty() && !(weeks.back() < w)) {
        throw input_error("weekly series '" + region_id +
                          "': weeks must be strictly increasing at " + w.to_string());
    }
    weeks.push_back(w);
    values.push_back(v);
}

} // namespace epimob
