#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "epimob/mobility.hpp"
#include "epimob/mortality.hpp"
#include "epimob/regression.hpp"
#include "epimob/rt.hpp"

namespace epimob {

// Readers and writers for every file the pipeline stages exchange. Each
// figure is re-derivable from these files alone.

void write_rt_daily(const std::filesystem::path& path,
                    const std::map<std::string, RtSeries>& rt);

void write_rt_weekly(const std::filesystem::path& path,
                     const std::map<std::string, WeeklyRt>& rt);
std::map<std::string, WeeklyRt> read_rt_weekly(const std::filesystem::path& path);

void write_onsets(const std::filesystem::path& path,
                  const std::map<std::string, OnsetRecord>& onsets);
std::map<std::string, OnsetRecord> read_onsets(const std::filesystem::path& path);

void write_aligned(const std::filesystem::path& path, const AlignedMatrix& aligned);
/// region -> values indexed by day since first case.
std::map<std::string, OptSeries> read_aligned(const std::filesystem::path& path);

void write_mobility(const std::filesystem::path& path, const MobilityTable& table);
MobilityTable read_mobility(const std::filesystem::path& path);

void write_relative_change(const std::filesystem::path& path,
                           const std::vector<RelativeChangeSeries>& series);
std::vector<RelativeChangeSeries> read_relative_change(const std::filesystem::path& path);

void write_excess(const std::filesystem::path& path, const std::vector<ExcessSeries>& series);
std::vector<ExcessSeries> read_excess(const std::filesystem::path& path);

void write_aggregate_excess(const std::filesystem::path& path, const AggregateExcess& agg);

void write_panel(const std::filesystem::path& path, const Panel& panel);
Panel read_panel(const std::filesystem::path& path);

void write_regression_csv(const std::filesystem::path& path,
                          const std::vector<TableColumn>& columns);

void write_lag_shifts(const std::filesystem::path& path,
                      const std::vector<LagShiftPoint>& points);
std::vector<LagShiftPoint> read_lag_shifts(const std::filesystem::path& path);

} // namespace epimob
