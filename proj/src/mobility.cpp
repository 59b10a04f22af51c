#include "epimob/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "epimob/csv.hpp"
#include "epimob/error.hpp"
#include "epimob/load.hpp"

namespace epimob {

const char* to_string(MobilityType t) {
    switch (t) {
        case MobilityType::Internal: return "internal";
        case MobilityType::Inbound: return "inbound";
        case MobilityType::Outbound: return "outbound";
    }
    return "?";
}

MobilityType parse_mobility_type(const std::string& token) {
    if (token == "internal") return MobilityType::Internal;
    if (token == "inbound") return MobilityType::Inbound;
    if (token == "outbound") return MobilityType::Outbound;
    throw input_error("unknown mobility type '" + token + "'");
}

std::string flags_to_string(uint8_t flags) {
    std::string out;
    if (flags & kFlagOutOfRange) out += "out_of_range";
    if (flags & kFlagDegenerate) out += (out.empty() ? "" : ";") + std::string("degenerate");
    return out;
}

const MobilityTable::Row* MobilityTable::find(const std::string& region_id,
                                              MobilityType type,
                                              const IsoWeek& week) const {
    auto key = std::make_tuple(region_id, int(type), week);
    auto it = std::lower_bound(rows.begin(), rows.end(), key, [](const Row& r, const auto& k) {
        return std::make_tuple(r.region_id, int(r.type), r.week) < k;
    });
    if (it == rows.end()) return nullptr;
    if (std::make_tuple(it->region_id, int(it->type), it->week) != key) return nullptr;
    return &*it;
}

std::vector<OdmRecord> load_odm(const std::filesystem::path& path,
                                const Registry& registry, size_t* dropped) {
    CsvReader csv(path);
    size_t c_period = csv.col("period");
    size_t c_origin = csv.col("origin");
    size_t c_dest = csv.col("destination");
    size_t c_count = csv.col("count");

    std::vector<OdmRecord> out;
    size_t n_dropped = 0;
    std::vector<std::string> f;
    while (csv.next(f)) {
        OdmRecord rec;
        const std::string& period = f[c_period];
        if (period.size() == 8 && period[4] == '-' && period[5] == 'W') {
            rec.weekly = true;
            rec.week = parse_iso_week(period);
        } else {
            rec.weekly = false;
            try {
                rec.day = parse_date(period);
            } catch (const Error& e) {
                throw input_error("'" + csv.path() + "' row " + std::to_string(csv.line()) +
                                  ": " + e.what());
            }
        }
        rec.origin = f[c_origin];
        rec.destination = f[c_dest];
        rec.count = parse_number(f[c_count], csv.path(), csv.line());
        if (rec.count < 0) {
            throw input_error("'" + csv.path() + "' row " + std::to_string(csv.line()) +
                              ": negative movement count");
        }
        if (!registry.contains(rec.origin) || !registry.contains(rec.destination)) {
            ++n_dropped;
            continue;
        }
        out.push_back(std::move(rec));
    }
    if (dropped) *dropped = n_dropped;
    return out;
}

MobilityTable weekly_aggregate(const std::vector<OdmRecord>& records,
                               const Registry& registry) {
    // Granularity guard: one (country, week) must not mix daily and weekly
    // records; harmonization is an upstream responsibility.
    std::map<std::pair<std::string, IsoWeek>, int> granularity;
    for (const auto& rec : records) {
        IsoWeek w = rec.iso_week();
        int bit = rec.weekly ? 2 : 1;
        for (const std::string* id : {&rec.origin, &rec.destination}) {
            const std::string& country = registry.at(*id).country;
            int& g = granularity[{country, w}];
            g |= bit;
            if (g == 3) {
                throw input_error("mixed daily/weekly ODM granularity for country '" +
                                  country + "' in week " + w.to_string());
            }
        }
    }

    std::map<std::tuple<std::string, int, IsoWeek>, double> sums;
    for (const auto& rec : records) {
        IsoWeek w = rec.iso_week();
        if (rec.origin == rec.destination) {
            sums[{rec.origin, int(MobilityType::Internal), w}] += rec.count;
        } else {
            sums[{rec.origin, int(MobilityType::Outbound), w}] += rec.count;
            sums[{rec.destination, int(MobilityType::Inbound), w}] += rec.count;
        }
    }

    MobilityTable table;
    table.rows.reserve(sums.size());
    for (const auto& [key, total] : sums) {
        MobilityTable::Row row;
        row.region_id = std::get<0>(key);
        row.type = MobilityType(std::get<1>(key));
        row.week = std::get<2>(key);
        row.raw = total;
        table.rows.push_back(std::move(row));
    }
    return table;
}

namespace {

struct Bounds {
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    void update(double v) {
        min = std::min(min, v);
        max = std::max(max, v);
    }
    bool valid() const { return min <= max; }
    bool degenerate() const { return valid() && max == min; }
};

// Normalizes `value(row)` into `out(row)` per (country, type) group with
// bounds taken over rows whose week lies in the window.
template <typename Get, typename Set>
void normalize_impl(MobilityTable& table, const Registry& registry,
                    const IsoWeek& window_start, const IsoWeek& window_end,
                    bool aggregates, Get value, Set set_norm) {
    if (window_end < window_start) {
        throw input_error("normalization window is empty (end before start)");
    }
    using GroupKey = std::pair<std::string, int>;

    if (!aggregates) {
        std::map<GroupKey, Bounds> bounds;
        for (const auto& row : table.rows) {
            if (row.week < window_start || window_end < row.week) continue;
            bounds[{registry.at(row.region_id).country, int(row.type)}].update(value(row));
        }
        for (auto& row : table.rows) {
            GroupKey key{registry.at(row.region_id).country, int(row.type)};
            auto it = bounds.find(key);
            if (it == bounds.end() || !it->second.valid()) {
                // No observation in the reference window for this group.
                throw input_error("normalization window " + window_start.to_string() + ":" +
                                  window_end.to_string() + " has no data for country '" +
                                  key.first + "', type " + to_string(row.type));
            }
            const Bounds& b = it->second;
            double norm = 0.0;
            uint8_t flags = row.flags;
            if (b.degenerate()) {
                flags |= kFlagDegenerate;
            } else {
                norm = (value(row) - b.min) / (b.max - b.min);
                if (norm < 0.0 || norm > 1.0) flags |= kFlagOutOfRange;
            }
            set_norm(row, norm, flags);
        }
        return;
    }

    // Aggregate mode: one score per region from its total over the window.
    std::map<std::pair<std::string, int>, double> totals;
    for (const auto& row : table.rows) {
        if (row.week < window_start || window_end < row.week) continue;
        totals[{row.region_id, int(row.type)}] += value(row);
    }
    std::map<GroupKey, Bounds> bounds;
    for (const auto& [key, total] : totals) {
        bounds[{registry.at(key.first).country, key.second}].update(total);
    }
    for (auto& row : table.rows) {
        GroupKey gkey{registry.at(row.region_id).country, int(row.type)};
        auto bit = bounds.find(gkey);
        auto tit = totals.find({row.region_id, int(row.type)});
        if (bit == bounds.end() || tit == totals.end()) {
            throw input_error("normalization window has no data for region '" +
                              row.region_id + "', type " + to_string(row.type));
        }
        const Bounds& b = bit->second;
        double norm = 0.0;
        uint8_t flags = row.flags;
        if (b.degenerate()) {
            flags |= kFlagDegenerate;
        } else {
            norm = (tit->second - b.min) / (b.max - b.min);
        }
        set_norm(row, norm, flags);
    }
}

} // namespace

void minmax_normalize(MobilityTable& table, const Registry& registry,
                      const IsoWeek& window_start, const IsoWeek& window_end,
                      bool normalize_aggregates) {
    normalize_impl(
        table, registry, window_start, window_end, normalize_aggregates,
        [](const MobilityTable::Row& r) { return r.raw; },
        [](MobilityTable::Row& r, double norm, uint8_t flags) {
            r.normalized = norm;
            r.has_normalized = true;
            r.flags = flags;
        });
}

void per_capita(MobilityTable& table, const Registry& registry,
                const IsoWeek& window_start, const IsoWeek& window_end,
                bool normalize_aggregates) {
    for (auto& row : table.rows) {
        double pop = registry.at(row.region_id).population;
        row.per_capita = row.raw / pop;
        row.has_per_capita = true;
    }
    normalize_impl(
        table, registry, window_start, window_end, normalize_aggregates,
        [](const MobilityTable::Row& r) { return r.per_capita; },
        [](MobilityTable::Row& r, double norm, uint8_t flags) {
            r.per_capita_norm = norm;
            r.flags = flags;
        });
}

std::vector<RelativeChangeSeries> relative_change(const MobilityTable& table,
                                                  MobilityType type,
                                                  const IsoWeek& reference_week,
                                                  std::vector<std::string>* warnings) {
    std::map<std::string, double> ref;
    std::map<std::string, std::vector<std::pair<IsoWeek, double>>> values;
    for (const auto& row : table.rows) {
        if (row.type != type) continue;
        values[row.region_id].emplace_back(row.week, row.raw);
        if (row.week == reference_week) ref[row.region_id] = row.raw;
    }

    std::vector<RelativeChangeSeries> out;
    for (auto& [id, series] : values) {
        auto it = ref.find(id);
        if (it == ref.end() || it->second <= 0.0) {
            if (warnings) {
                warnings->push_back("relative_change: region '" + id +
                                    "' excluded (reference week " +
                                    reference_week.to_string() + " absent or zero)");
            }
            continue;
        }
        double r = it->second;
        RelativeChangeSeries s;
        s.region_id = id;
        for (const auto& [w, v] : series) {
            s.weeks.push_back(w);
            s.pct.push_back(100.0 * (v - r) / r);
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace epimob
