#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epimob/calendar.hpp"
#include "epimob/mobility.hpp"
#include "epimob/region.hpp"
#include "epimob/rt.hpp"

namespace epimob {

/// One region-week observation with all regressors materialized.
struct PanelRow {
    std::string region_id;
    std::string country;
    IsoWeek week;
    double rt = 0.0;
    double intermediate = 0.0; // typology dummies; urban is the reference
    double rural = 0.0;
    double internal = 0.0; // min-max normalized mobility
    double inbound = 0.0;
    double outbound = 0.0;
    double internal_pca = 0.0; // normalized per-capita internal mobility
    double population = 0.0;   // transformed per PanelConfig
    double density = 0.0;
};

struct Panel {
    std::vector<PanelRow> rows;
    size_t dropped_missing = 0; // region-weeks lacking a required field
    size_t n_regions = 0;
};

enum class Wave { First, Second };
enum class PopTransform { MinMax, Raw, Log };

struct PanelConfig {
    Wave wave = Wave::First;
    int onset_window_days = 28;          // first wave: days since onset
    Date second_wave_after{2020, 8, 31}; // second wave: weeks starting after
    PopTransform pop_transform = PopTransform::MinMax;
    bool include_censored = false; // right-censored weekly Rt is excluded by default
};

/// Joins weekly Rt with normalized mobility into regression rows. First
/// wave keeps ISO weeks intersecting each region's first onset_window_days
/// days since onset (regions without onset contribute nothing); second
/// wave keeps weeks starting after the cutoff. Rows missing any required
/// field are dropped and counted. An empty result is an error naming the
/// filter.
Panel build_panel(const std::map<std::string, WeeklyRt>& rt_weekly,
                  const MobilityTable& mobility, const Registry& registry,
                  const std::map<std::string, OnsetRecord>& onsets,
                  const PanelConfig& config);

struct Coefficient {
    std::string name;
    double estimate = 0.0;
    double se = 0.0;
    double t = 0.0;
    double p = 0.0;
    int stars = 0;       // p<0.1 *, p<0.05 **, p<0.01 ***
    bool fixed_effect = false;
};

struct RegressionResult {
    std::string spec_id;
    std::vector<Coefficient> coefficients; // intercept, regressors, FE dummies
    size_t n_observations = 0;
    double r_squared = 0.0;
    double adj_r_squared = 0.0;
    int fixed_effect_levels = 0; // distinct countries

    const Coefficient* find(const std::string& name) const;
};

struct OlsOptions {
    bool country_fixed_effects = true;
    bool robust_se = false; // HC1 instead of classical homoskedastic
    std::string spec_id;
};

/// OLS via column-pivoted QR with classical standard errors. Country fixed
/// effects enter as dummies with the first country as reference. Errors on
/// rank deficiency (naming suspect columns) and on n <= parameters.
RegressionResult ols_fit(const Panel& panel, const std::vector<std::string>& regressors,
                         const OlsOptions& options = {});

int significance_stars(double p_value);

struct TableColumn {
    std::string spec_id;
    std::optional<RegressionResult> result;
    std::string error; // set when the fit failed
};

/// The nine table specifications: typology; each mobility indicator
/// separately; per-capita internal; population; density; typology+internal;
/// typology+internal+population+density.
std::vector<std::vector<std::string>> table_formulas();

std::vector<TableColumn> run_table(const Panel& panel, bool robust_se = false);

/// Fixed-width text rendering with significance stars and fit statistics.
std::string render_table(const std::vector<TableColumn>& columns, const std::string& title);

struct LagShiftPoint {
    int shift = 0;
    double coefficient = 0.0;
    double se = 0.0;
    double lower95 = 0.0;
    double upper95 = 0.0;
    size_t n_observations = 0;
};

/// For each shift s, regresses Rt(week w) on internal mobility(week w+s)
/// with country fixed effects. Shifts whose join empties the panel are
/// omitted with a warning.
std::vector<LagShiftPoint> lag_shift_regress(const Panel& panel,
                                             const MobilityTable& mobility,
                                             int min_shift, int max_shift,
                                             std::vector<std::string>* warnings = nullptr);

} // namespace epimob
