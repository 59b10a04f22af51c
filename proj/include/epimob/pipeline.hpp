#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "epimob/calendar.hpp"
#include "epimob/regression.hpp"
#include "epimob/simulator.hpp"

namespace epimob {

/// Full-run configuration: a scenario (or ingest paths) plus per-stage
/// parameters, all in one flat key=value file.
struct PipelineConfig {
    ScenarioConfig scenario;

    // Ingest mode: when input.regions is set the simulate stage is skipped
    // and these files are consumed instead.
    std::string input_regions;
    std::string input_cases;
    std::string input_deaths;
    std::string input_odm;

    int align_window_days = 56;
    int onset_window_days = 28;
    double onset_threshold = 20;
    Date second_wave_after{2020, 8, 31};
    IsoWeek mobility_window_start{2020, 6};
    IsoWeek mobility_window_end{2020, 52};
    IsoWeek relative_to{2020, 9}; // last full February week of 2020
    int shift_min = -3;
    int shift_max = 3;
    int mortality_knots = 12;
    int train_start_year = 2011;
    int train_end_year = 2019;
    int target_year = 2020;
    PopTransform pop_transform = PopTransform::MinMax;
    bool include_censored = false;

    static PipelineConfig parse(const std::filesystem::path& path);
};

/// simulate/ingest -> rt -> excess -> mobility -> panel -> regress ->
/// figures -> manifest, everything under out_dir. Errors carry the failing
/// stage name; warnings are summarized on the log stream.
void run_pipeline(const PipelineConfig& config, const std::filesystem::path& config_path,
                  const std::filesystem::path& out_dir, std::ostream& log);

PopTransform parse_pop_transform(const std::string& token);

} // namespace epimob
