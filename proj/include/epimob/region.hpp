#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace epimob {

enum class Typology { Urban, Intermediate, Rural };

const char* to_string(Typology t);

/// Parses a typology token case-insensitively; throws input_error on
/// unknown tokens.
Typology parse_typology(const std::string& token);

struct Region {
    std::string region_id;
    std::string country;     // ISO-3166 alpha-2
    Typology typology = Typology::Urban;
    double population = 0.0; // persons
    double area_km2 = 0.0;
    double density = 0.0;    // persons per km2
};

/// Immutable-after-load set of regions with unique ids.
class Registry {
public:
    /// Throws input_error on duplicate region_id or non-positive
    /// population/area. Computes density when the caller left it 0.
    void add(Region r);

    bool contains(const std::string& region_id) const {
        return index_.count(region_id) != 0;
    }

    /// Throws input_error when the id is unknown.
    const Region& at(const std::string& region_id) const;

    const std::vector<Region>& regions() const { return regions_; }
    size_t size() const { return regions_.size(); }

    auto begin() const { return regions_.begin(); }
    auto end() const { return regions_.end(); }

    /// Distinct countries, sorted.
    std::vector<std::string> countries() const;

private:
    std::vector<Region> regions_;
    std::unordered_map<std::string, size_t> index_;
};

} // namespace epimob
