#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "epimob/calendar.hpp"
#include "epimob/gentime.hpp"
#include "epimob/mobility.hpp"
#include "epimob/region.hpp"
#include "epimob/series.hpp"

namespace epimob {

/// Multiplicative mortality bump over a week range, per typology.
struct ExcessWindow {
    IsoWeek start;
    IsoWeek end;
    double urban = 0.0; // fractional increase, e.g. 0.4 = +40%
    double intermediate = 0.0;
    double rural = 0.0;
};

/// Synthetic-panel scenario. Every key of the flat key=value config file
/// maps to one field; parse() rejects unknown keys.
struct ScenarioConfig {
    uint64_t seed = 42;
    int countries = 4;
    int regions_urban = 3;
    int regions_intermediate = 3;
    int regions_rural = 3;
    Date start_date{2020, 1, 6}; // first simulated day
    int weeks = 45;

    double seed_cases = 25.0;   // cases on day 0
    double import_rate = 0.25;  // mean imported cases per day

    double gi_mean_days = 3.96; // generation interval
    double gi_sd_days = 4.75;
    int gi_max_lag = 35;

    // Rt(region, week) = alpha(country) + beta * normalized internal
    // mobility(region, week + lag) + noise, clipped at 0.
    double alpha = 0.75;
    double alpha_spread = 0.1; // alpha(country) spans [alpha, alpha+spread]
    double beta = 0.9;
    int coupling_lag_weeks = 0;
    double rt_noise_sd = 0.05;

    double mobility_pc_urban = 2.2; // weekly movements per person
    double mobility_pc_intermediate = 1.6;
    double mobility_pc_rural = 1.1;
    double mobility_noise_sd = 0.1; // lognormal sd of region-week jitter
    double cross_frac = 0.15;       // outbound flows as a share of internal
    int fanout = 5;                 // destinations per region and week

    // Piecewise-linear weekly mobility shape (indices into the sim weeks).
    int lockdown_start_week = 9;
    int lockdown_end_week = 13;
    double lockdown_level = 0.4;
    int summer_peak_week = 28;
    double summer_level = 1.15;
    int autumn_week = 36;
    double autumn_level = 0.7;

    double population_urban = 800000;
    double population_intermediate = 250000;
    double population_rural = 90000;
    double population_jitter = 0.2; // relative uniform jitter
    double area_urban = 500;
    double area_intermediate = 900;
    double area_rural = 1400;

    double mortality_weekly_rate = 0.00019; // weekly deaths per person
    double mortality_seasonal_amplitude = 0.15;
    int mortality_peak_week = 2;       // week-of-year of the seasonal peak
    double mortality_trend = 0.004;    // fractional increase per year
    double mortality_noise = 0.02;     // sd as a fraction of the level
    int history_start_year = 2011;
    int history_end_year = 2019;

    std::vector<ExcessWindow> excess_windows = {
        {{2020, 14}, {2020, 19}, 0.73, 0.15, 0.05},
        {{2020, 44}, {2020, 49}, 0.26, 0.32, 0.38},
    };

    static ScenarioConfig parse(const std::filesystem::path& path);
    /// Consumes this scenario's keys from an already-loaded config.
    static ScenarioConfig from_kv(class KeyValues& kv);
    void validate() const;

    IsoWeek first_week() const { return iso_week_of(start_date); }
    int n_days() const { return weeks * 7; }
};

struct GroundTruth {
    std::map<std::string, WeeklySeries> rt;         // configured Rt per region-week
    std::map<std::string, WeeklySeries> excess_pct; // injected excess (percent)
    double beta = 0.0;
    int coupling_lag_weeks = 0;
};

struct SimDataset {
    Registry regions;
    std::map<std::string, DailySeries> cases;
    std::map<std::string, WeeklySeries> deaths;
    std::vector<OdmRecord> odm;
    MobilityTable mobility; // simulator-side aggregation of `odm`
    GroundTruth truth;
};

/// Poisson renewal process: cases[t] ~ Poisson(R(t) * sum_k cases[t-k] *
/// w(k) + import_rate), seeded with seed_cases on day 0. Deterministic
/// under a fixed rng seed. Expected cases above 1e9 abort with an error.
DailySeries simulate_cases(const std::vector<double>& daily_r, const GenerationInterval& gi,
                           double seed_cases, double import_rate, uint64_t seed,
                           const Date& start, const std::string& region_id);

struct MortalityParams {
    double level = 100.0;     // weekly deaths
    double seasonal_amplitude = 0.15;
    int peak_week = 2;
    double trend = 0.004;     // fraction of level per year
    double noise = 0.02;      // sd as fraction of level
    int history_start_year = 2011;
    int history_end_year = 2019;
    int target_year = 2020;
};

/// Weekly deaths for the history years plus the target year, with
/// multiplicative excess applied inside the windows (target year only).
WeeklySeries simulate_mortality(const MortalityParams& params,
                                const std::vector<std::pair<IsoWeek, IsoWeek>>& windows,
                                double excess_frac, uint64_t seed,
                                const std::string& region_id);

/// The generating expectation of simulate_mortality (no noise, no excess).
double mortality_expectation(const MortalityParams& params, const IsoWeek& week);

SimDataset simulate_panel(const ScenarioConfig& config);

/// regions.csv, cases.csv, deaths.csv, odm.csv, truth_rt.csv,
/// truth_excess.csv under dir (created if needed).
void write_dataset(const SimDataset& dataset, const std::filesystem::path& dir);

/// Writes a fully commented config with every key at its default.
void write_default_config(const std::filesystem::path& path);

} // namespace epimob
