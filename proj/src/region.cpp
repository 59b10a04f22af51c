#include "epimob/region.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "epimob/error.hpp"

namespace epimob {

const char* to_string(Typology t) {
    switch (t) {
        case Typology::Urban: return "urban";
        case Typology::Intermediate: return "intermediate";
        case Typology::Rural: return "rural";
    }
    return "?";
}

Typology parse_typology(const std::string& token) {
    std::string low(token);
    std::transform(low.begin(), low.end(), low.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (low == "urban") return Typology::Urban;
    if (low == "intermediate") return Typology::Intermediate;
    if (low == "rural") return Typology::Rural;
    throw input_error("unknown typology token '" + token + "'");
}

void Registry::add(Region r) {
    if (index_.count(r.region_id)) {
        throw input_error("duplicate region_id '" + r.region_id + "'");
    }
    if (!(r.population > 0)) {
        throw input_error("region '" + r.region_id + "': population must be positive");
    }
    if (!(r.area_km2 > 0)) {
        throw input_error("region '" + r.region_id + "': area must be positive");
    }
    if (r.density == 0.0) {
        r.density = r.population / r.area_km2;
    }
    if (!(r.density > 0)) {
        throw input_error("region '" + r.region_id + "': density must be positive");
    }
    index_.emplace(r.region_id, regions_.size());
    regions_.push_back(std::move(r));
}

const Region& Registry::at(const std::string& region_id) const {
    auto it = index_.find(region_id);
    if (it == index_.end()) {
        throw input_error("unregistered region_id '" + region_id + "'");
    }
    return regions_[it->second];
}

std::vector<std::string> Registry::countries() const {
    std::set<std::string> seen;
    for (const auto& r : regions_) seen.insert(r.country);
    return {seen.begin(), seen.end()};
}

} // namespace epimob
