#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epimob/calendar.hpp"
#include "epimob/group.hpp"
#include "epimob/region.hpp"
#include "epimob/series.hpp"

namespace epimob {

struct BaselineConfig {
    int knots = 12;        // cyclic cubic B-spline basis size over week-of-year
    size_t min_weeks = 156; // >= 3 full years of history
    /// Fixed log-spaced smoothing grid searched by GCV (deterministic).
    std::vector<double> lambda_grid = default_lambda_grid();

    static std::vector<double> default_lambda_grid();
};

/// Penalized least-squares baseline: deaths ~ cyclic-spline(week-of-year)
/// + linear(year), Gaussian errors, smoothing chosen by GCV. Week 53 is
/// mapped onto the week-52 basis position.
struct BaselineModel {
    std::string region_id;
    int knots = 0;

    // Raw fitted coefficients: knots spline values then trend slope
    // (or {intercept, slope} when fallback is set).
    std::vector<double> coeffs;
    // Coefficient covariance (row-major, coeffs.size()^2), dispersion included.
    std::vector<double> cov;

    double intercept = 0.0;             // mean seasonal level
    std::vector<double> seasonal_coeffs; // level-centered spline coefficients
    double trend_slope = 0.0;           // deaths per year
    double time_anchor = 0.0;           // serial day the trend is centered on

    double dispersion = 0.0; // RSS / (n - edf)
    double lambda = 0.0;
    double edf = 0.0;
    int train_first_year = 0;
    int train_last_year = 0;
    Date train_start;
    bool fallback = false; // intercept+trend only (singular seasonal design)

    /// Seasonal component (including level) at week-of-year position u in
    /// [0, 52); cyclic in u.
    double seasonal_at(double u) const;
};

struct BaselinePrediction {
    std::string region_id;
    std::vector<IsoWeek> weeks;
    std::vector<double> expected;
    std::vector<double> lower95; // prediction interval (includes dispersion)
    std::vector<double> upper95;
};

struct ExcessSeries {
    std::string region_id;
    std::vector<IsoWeek> weeks;
    std::vector<double> observed;
    std::vector<double> expected;
    std::vector<double> lower95;
    std::vector<double> upper95;
    std::vector<double> excess;     // observed-expected outside bands, else 0
    std::vector<double> excess_pct; // 100*(obs-exp)/exp where exceeding, else 0
};

/// Total excess (sum across regions) per week, and per-typology median
/// excess_pct per week.
struct AggregateExcess {
    std::vector<IsoWeek> weeks;
    std::vector<double> total_excess;
    std::map<Typology, OptSeries> median_excess_pct;
};

/// Cyclic cubic B-spline basis values at week-of-year position u.
std::vector<double> seasonal_basis(double u, int knots);

/// Week-of-year basis position for an ISO week (week 53 wraps onto 52).
double week_position(const IsoWeek& w);

/// Requires >= config.min_weeks observations and non-negative deaths.
/// Falls back to intercept+trend (flagged) on a singular seasonal design.
BaselineModel fit_baseline(const WeeklySeries& history, const BaselineConfig& config = {});

/// Errors on weeks before the training span start (no backcasting).
BaselinePrediction predict_baseline(const BaselineModel& model,
                                    const std::vector<IsoWeek>& weeks);

/// Excess beyond the 95% bands; negative excess (mortality displacement)
/// allowed. Observed weeks missing from the prediction raise an error
/// listing the offending weeks.
ExcessSeries excess(const WeeklySeries& observed, const BaselinePrediction& predicted);

AggregateExcess aggregate_excess(const std::vector<ExcessSeries>& series,
                                 const Registry& registry);

} // namespace epimob
