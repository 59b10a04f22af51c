#include "epimob/group.hpp"

#include <algorithm>

#include "epimob/error.hpp"

namespace epimob {

double median(std::vector<double> values) {
    if (values.empty()) {
        throw computation_error("median of empty set");
    }
    size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    double hi = values[mid];
    if (values.size() % 2 == 1) return hi;
    double lo = *std::max_element(values.begin(), values.begin() + mid);
    return (lo + hi) / 2.0;
}

std::map<Typology, OptSeries> group_median(
    const std::map<std::string, OptSeries>& values, const Registry& registry) {
    size_t len = 0;
    for (const auto& [id, series] : values) {
        registry.at(id); // throws on unregistered regions
        len = std::max(len, series.size());
    }

    std::map<Typology, OptSeries> out;
    for (Typology t : {Typology::Urban, Typology::Intermediate, Typology::Rural}) {
        out[t] = OptSeries(len);
    }

    std::vector<double> bucket;
    for (size_t i = 0; i < len; ++i) {
        for (Typology t : {Typology::Urban, Typology::Intermediate, Typology::Rural}) {
            bucket.clear();
            for (const auto& [id, series] : values) {
                if (registry.at(id).typology != t) continue;
                if (i < series.size() && series[i].has_value()) {
                    bucket.push_back(*series[i]);
                }
            }
            if (!bucket.empty()) {
                out[t][i] = median(bucket);
            }
        }
    }
    return out;
}

std::map<Typology, std::optional<double>> group_median_scalar(
    const std::map<std::string, double>& values, const Registry& registry) {
    std::map<std::string, OptSeries> wrapped;
    for (const auto& [id, v] : values) {
        wrapped[id] = OptSeries{v};
    }
    auto series = group_median(wrapped, registry);
    std::map<Typology, std::optional<double>> out;
    for (const auto& [t, s] : series) {
        out[t] = s.empty() ? std::nullopt : s[0];
    }
    return out;
}

} // namespace epimob
