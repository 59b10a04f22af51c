#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "epimob/region.hpp"
#include "epimob/series.hpp"

namespace epimob {

/// CSV header: region_id,country,typology,population,area_km2[,density].
/// Rejects the file (with row number) on duplicate ids, non-positive
/// population/area, or unknown typology tokens.
Registry load_regions(const std::filesystem::path& path);

/// CSV header: region_id,date,new_cases. Daily NEW cases only; gap days
/// inside a region's observed span are zero-filled.
std::map<std::string, DailySeries> load_daily_cases(const std::filesystem::path& path,
                                                    const Registry& registry);

/// CSV header: region_id,iso_year,iso_week,deaths. Missing weeks stay absent.
std::map<std::string, WeeklySeries> load_weekly_deaths(const std::filesystem::path& path,
                                                       const Registry& registry);

void write_regions(const std::filesystem::path& path, const Registry& registry);
void write_daily_cases(const std::filesystem::path& path,
                       const std::map<std::string, DailySeries>& cases);
void write_weekly_deaths(const std::filesystem::path& path,
                         const std::map<std::string, WeeklySeries>& deaths);

/// Number parsing with file/row context in the error message.
double parse_number(const std::string& text, const std::string& file, size_t row);

} // namespace epimob
