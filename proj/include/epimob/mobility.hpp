#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "epimob/calendar.hpp"
#include "epimob/region.hpp"

namespace epimob {

enum class MobilityType { Internal, Inbound, Outbound };

const char* to_string(MobilityType t);
MobilityType parse_mobility_type(const std::string& token);

/// One origin-destination count for a day or an ISO week.
struct OdmRecord {
    bool weekly = false;
    Date day;     // valid when !weekly
    IsoWeek week; // valid when weekly
    std::string origin;
    std::string destination;
    double count = 0.0;

    IsoWeek iso_week() const { return weekly ? week : iso_week_of(day); }
};

/// Per-value quality flags on normalized indicators.
enum MobilityFlag : uint8_t {
    kFlagNone = 0,
    kFlagOutOfRange = 1,  // outside [0,1]: week not in the reference window
    kFlagDegenerate = 2,  // min == max within the (country, type) group
};

std::string flags_to_string(uint8_t flags);

/// Weekly mobility observations, one row per (region, type, week).
struct MobilityTable {
    struct Row {
        std::string region_id;
        MobilityType type = MobilityType::Internal;
        IsoWeek week;
        double raw = 0.0;
        double per_capita = 0.0;      // raw / population
        double normalized = 0.0;      // min-max within (country, type)
        double per_capita_norm = 0.0; // same normalization on per-capita values
        uint8_t flags = kFlagNone;
        bool has_per_capita = false;
        bool has_normalized = false;
    };
    std::vector<Row> rows; // sorted by (region, type, week)
    size_t dropped_unregistered = 0;
    std::vector<std::string> warnings;

    const Row* find(const std::string& region_id, MobilityType type,
                    const IsoWeek& week) const;
};

/// ODM CSV: period,origin,destination,count with period YYYY-MM-DD or
/// YYYY-Www. Records whose origin or destination is unregistered are
/// counted and dropped.
std::vector<OdmRecord> load_odm(const std::filesystem::path& path,
                                const Registry& registry, size_t* dropped = nullptr);

/// Buckets daily records into ISO weeks and accumulates the three
/// indicators. Internal = origin == destination; Inbound/Outbound = flows
/// with distinct endpoints attributed to destination/origin. Mixing daily
/// and weekly records within one (country, week) is an error.
MobilityTable weekly_aggregate(const std::vector<OdmRecord>& records,
                               const Registry& registry);

/// Min-max normalization per (country, type) over all region-week raw
/// values inside [window_start, window_end]. Values outside the window use
/// the same bounds and may leave [0,1] (flagged). Degenerate groups
/// normalize to 0 with a flag. With normalize_aggregates, the bounds and
/// scores come from per-region totals over the window instead, giving each
/// region one score applied to all its weeks.
void minmax_normalize(MobilityTable& table, const Registry& registry,
                      const IsoWeek& window_start, const IsoWeek& window_end,
                      bool normalize_aggregates = false);

/// Fills per_capita = raw / population, then applies the same min-max
/// normalization to the per-capita values.
void per_capita(MobilityTable& table, const Registry& registry,
                const IsoWeek& window_start, const IsoWeek& window_end,
                bool normalize_aggregates = false);

struct RelativeChangeSeries {
    std::string region_id;
    std::vector<IsoWeek> weeks;
    std::vector<double> pct; // 100 * (value - ref) / ref
};

/// Percent change of raw values against a reference week; regions whose
/// reference value is absent or zero are excluded with a warning.
std::vector<RelativeChangeSeries> relative_change(const MobilityTable& table,
                                                  MobilityType type,
                                                  const IsoWeek& reference_week,
                                                  std::vector<std::string>* warnings = nullptr);

} // namespace epimob
