// Python bindings for the core operations: reproduction-number estimation,
// mortality baselines, mobility indicators, panel regression, and the
// synthetic-panel simulator.

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "epimob/error.hpp"
#include "epimob/gentime.hpp"
#include "epimob/group.hpp"
#include "epimob/load.hpp"
#include "epimob/mobility.hpp"
#include "epimob/mortality.hpp"
#include "epimob/regression.hpp"
#include "epimob/rt.hpp"
#include "epimob/simulator.hpp"

namespace py = pybind11;
using namespace epimob;

PYBIND11_MODULE(_epimob, m) {
    m.doc() = "Regional epidemic analytics: Rt, excess mortality, mobility, regression";

    py::register_exception<Error>(m, "EpimobError");

    // calendar
    py::class_<Date>(m, "Date")
        .def(py::init([](const std::string& s) { return parse_date(s); }))
        .def(py::init<int, int, int>())
        .def_readonly("year", &Date::year)
        .def_readonly("month", &Date::month)
        .def_readonly("day", &Date::day)
        .def("plus_days", &Date::plus_days)
        .def("__str__", &Date::to_string)
        .def("__repr__", [](const Date& d) { return "Date(" + d.to_string() + ")"; })
        .def(py::self == py::self)
        .def(py::self < py::self);

    py::class_<IsoWeek>(m, "IsoWeek")
        .def(py::init<int, int>())
        .def(py::init([](const std::string& s) { return parse_iso_week(s); }))
        .def_readonly("year", &IsoWeek::year)
        .def_readonly("week", &IsoWeek::week)
        .def("start_date", &IsoWeek::start_date)
        .def("plus_weeks", &IsoWeek::plus_weeks)
        .def("__str__", &IsoWeek::to_string)
        .def("__repr__", [](const IsoWeek& w) { return "IsoWeek(" + w.to_string() + ")"; })
        .def(py::self == py::self)
        .def(py::self < py::self);

    m.def("iso_week_of", &iso_week_of);
    m.def("weeks_in_iso_year", &weeks_in_iso_year);

    // core types
    py::enum_<Typology>(m, "Typology")
        .value("Urban", Typology::Urban)
        .value("Intermediate", Typology::Intermediate)
        .value("Rural", Typology::Rural);

    py::class_<Region>(m, "Region")
        .def(py::init([](std::string id, std::string country, Typology t, double pop,
                         double area, double density) {
                 return Region{std::move(id), std::move(country), t, pop, area, density};
             }),
             py::arg("region_id"), py::arg("country"), py::arg("typology"),
             py::arg("population"), py::arg("area_km2"), py::arg("density") = 0.0)
        .def_readonly("region_id", &Region::region_id)
        .def_readonly("country", &Region::country)
        .def_readonly("typology", &Region::typology)
        .def_readonly("population", &Region::population)
        .def_readonly("area_km2", &Region::area_km2)
        .def_readonly("density", &Region::density);

    py::class_<Registry>(m, "Registry")
        .def(py::init<>())
        .def("add", &Registry::add)
        .def("contains", &Registry::contains)
        .def("at", &Registry::at, py::return_value_policy::copy)
        .def("countries", &Registry::countries)
        .def("__len__", &Registry::size);

    py::class_<DailySeries>(m, "DailySeries")
        .def(py::init([](std::string id, const Date& start, std::vector<double> values) {
                 return DailySeries{std::move(id), start, std::move(values)};
             }),
             py::arg("region_id"), py::arg("start"), py::arg("values"))
        .def_readonly("region_id", &DailySeries::region_id)
        .def_readonly("start", &DailySeries::start)
        .def_readonly("values", &DailySeries::values);

    py::class_<WeeklySeries>(m, "WeeklySeries")
        .def(py::init([](std::string id) {
                 WeeklySeries s;
                 s.region_id = std::move(id);
                 return s;
             }),
             py::arg("region_id"))
        .def("push", &WeeklySeries::push)
        .def("at", &WeeklySeries::at)
        .def_readonly("region_id", &WeeklySeries::region_id)
        .def_readonly("weeks", &WeeklySeries::weeks)
        .def_readonly("values", &WeeklySeries::values)
        .def("__len__", &WeeklySeries::size);

    m.def("load_regions", &load_regions);
    m.def("load_daily_cases", &load_daily_cases);
    m.def("load_weekly_deaths", &load_weekly_deaths);
    m.def("group_median", &group_median, py::arg("values"), py::arg("registry"));
    m.def("median", &median);

    // gentime
    py::class_<GenerationInterval>(m, "GenerationInterval")
        .def_readonly("pmf", &GenerationInterval::pmf)
        .def_readonly("mean_days", &GenerationInterval::mean_days)
        .def_readonly("sd_days", &GenerationInterval::sd_days)
        .def("max_lag", &GenerationInterval::max_lag)
        .def("w", &GenerationInterval::w)
        .def("discrete_mean", &GenerationInterval::discrete_mean)
        .def("discrete_sd", &GenerationInterval::discrete_sd);
    m.def("discretize_gamma", &discretize_gamma, py::arg("mean_days"), py::arg("sd_days"),
          py::arg("max_lag"));

    // rt
    py::class_<RtSeries>(m, "RtSeries")
        .def_readonly("region_id", &RtSeries::region_id)
        .def_readonly("start", &RtSeries::start)
        .def_readonly("daily", &RtSeries::daily)
        .def_readonly("censored", &RtSeries::censored);

    py::class_<WeeklyRt>(m, "WeeklyRt")
        .def_readonly("series", &WeeklyRt::series)
        .def_readonly("censored", &WeeklyRt::censored);

    py::class_<OnsetRecord>(m, "OnsetRecord")
        .def_readonly("region_id", &OnsetRecord::region_id)
        .def_readonly("onset_day", &OnsetRecord::onset_day)
        .def_readonly("reached", &OnsetRecord::reached);

    py::class_<AlignedMatrix>(m, "AlignedMatrix")
        .def_readonly("region_ids", &AlignedMatrix::region_ids)
        .def_readonly("rows", &AlignedMatrix::rows)
        .def_readonly("dropped", &AlignedMatrix::dropped);

    m.def("wallinga_teunis", &wallinga_teunis, py::arg("cases"), py::arg("gi"));
    m.def("weekly_average", &weekly_average);
    m.def("onset_day", &onset_day, py::arg("cases"), py::arg("threshold") = 20.0);
    m.def("first_case_dates", &first_case_dates);
    m.def("align_by_onset", &align_by_onset, py::arg("series"), py::arg("anchors"),
          py::arg("window_days"));

    // mortality
    py::class_<BaselineConfig>(m, "BaselineConfig")
        .def(py::init<>())
        .def_readwrite("knots", &BaselineConfig::knots)
        .def_readwrite("min_weeks", &BaselineConfig::min_weeks)
        .def_readwrite("lambda_grid", &BaselineConfig::lambda_grid);

    py::class_<BaselineModel>(m, "BaselineModel")
        .def_readonly("region_id", &BaselineModel::region_id)
        .def_readonly("intercept", &BaselineModel::intercept)
        .def_readonly("seasonal_coeffs", &BaselineModel::seasonal_coeffs)
        .def_readonly("trend_slope", &BaselineModel::trend_slope)
        .def_readonly("dispersion", &BaselineModel::dispersion)
        .def_readonly("edf", &BaselineModel::edf)
        .def_readonly("lambda_", &BaselineModel::lambda)
        .def_readonly("fallback", &BaselineModel::fallback)
        .def("seasonal_at", &BaselineModel::seasonal_at);

    py::class_<BaselinePrediction>(m, "BaselinePrediction")
        .def_readonly("weeks", &BaselinePrediction::weeks)
        .def_readonly("expected", &BaselinePrediction::expected)
        .def_readonly("lower95", &BaselinePrediction::lower95)
        .def_readonly("upper95", &BaselinePrediction::upper95);

    py::class_<ExcessSeries>(m, "ExcessSeries")
        .def_readonly("region_id", &ExcessSeries::region_id)
        .def_readonly("weeks", &ExcessSeries::weeks)
        .def_readonly("observed", &ExcessSeries::observed)
        .def_readonly("expected", &ExcessSeries::expected)
        .def_readonly("lower95", &ExcessSeries::lower95)
        .def_readonly("upper95", &ExcessSeries::upper95)
        .def_readonly("excess", &ExcessSeries::excess)
        .def_readonly("excess_pct", &ExcessSeries::excess_pct);

    py::class_<AggregateExcess>(m, "AggregateExcess")
        .def_readonly("weeks", &AggregateExcess::weeks)
        .def_readonly("total_excess", &AggregateExcess::total_excess)
        .def_readonly("median_excess_pct", &AggregateExcess::median_excess_pct);

    m.def("fit_baseline", &fit_baseline, py::arg("history"),
          py::arg("config") = BaselineConfig{});
    m.def("predict_baseline", &predict_baseline);
    m.def("excess", &excess, py::arg("observed"), py::arg("predicted"));
    m.def("aggregate_excess", &aggregate_excess);

    // mobility
    py::enum_<MobilityType>(m, "MobilityType")
        .value("Internal", MobilityType::Internal)
        .value("Inbound", MobilityType::Inbound)
        .value("Outbound", MobilityType::Outbound);

    py::class_<OdmRecord>(m, "OdmRecord")
        .def(py::init([](const IsoWeek& week, std::string origin, std::string destination,
                         double count) {
                 OdmRecord r;
                 r.weekly = true;
                 r.week = week;
                 r.origin = std::move(origin);
                 r.destination = std::move(destination);
                 r.count = count;
                 return r;
             }),
             py::arg("week"), py::arg("origin"), py::arg("destination"), py::arg("count"))
        .def(py::init([](const Date& day, std::string origin, std::string destination,
                         double count) {
                 OdmRecord r;
                 r.weekly = false;
                 r.day = day;
                 r.origin = std::move(origin);
                 r.destination = std::move(destination);
                 r.count = count;
                 return r;
             }),
             py::arg("day"), py::arg("origin"), py::arg("destination"), py::arg("count"));

    py::class_<MobilityTable::Row>(m, "MobilityRow")
        .def_readonly("region_id", &MobilityTable::Row::region_id)
        .def_readonly("type", &MobilityTable::Row::type)
        .def_readonly("week", &MobilityTable::Row::week)
        .def_readonly("raw", &MobilityTable::Row::raw)
        .def_readonly("per_capita", &MobilityTable::Row::per_capita)
        .def_readonly("normalized", &MobilityTable::Row::normalized)
        .def_readonly("per_capita_norm", &MobilityTable::Row::per_capita_norm)
        .def_readonly("flags", &MobilityTable::Row::flags);

    py::class_<MobilityTable>(m, "MobilityTable")
        .def_readonly("rows", &MobilityTable::rows)
        .def("find", &MobilityTable::find, py::return_value_policy::reference_internal);

    py::class_<RelativeChangeSeries>(m, "RelativeChangeSeries")
        .def_readonly("region_id", &RelativeChangeSeries::region_id)
        .def_readonly("weeks", &RelativeChangeSeries::weeks)
        .def_readonly("pct", &RelativeChangeSeries::pct);

    m.def("load_odm", [](const std::filesystem::path& p, const Registry& r) {
        size_t dropped = 0;
        auto records = load_odm(p, r, &dropped);
        return py::make_tuple(records, dropped);
    });
    m.def("weekly_aggregate", &weekly_aggregate);
    m.def("minmax_normalize", &minmax_normalize, py::arg("table"), py::arg("registry"),
          py::arg("window_start"), py::arg("window_end"),
          py::arg("normalize_aggregates") = false);
    m.def("per_capita", &per_capita, py::arg("table"), py::arg("registry"),
          py::arg("window_start"), py::arg("window_end"),
          py::arg("normalize_aggregates") = false);
    m.def(
        "relative_change",
        [](const MobilityTable& t, MobilityType type, const IsoWeek& ref) {
            std::vector<std::string> warnings;
            auto series = relative_change(t, type, ref, &warnings);
            return py::make_tuple(series, warnings);
        },
        py::arg("table"), py::arg("type"), py::arg("reference_week"));

    // regression
    py::class_<PanelRow>(m, "PanelRow")
        .def(py::init<>())
        .def_readwrite("region_id", &PanelRow::region_id)
        .def_readwrite("country", &PanelRow::country)
        .def_readwrite("week", &PanelRow::week)
        .def_readwrite("rt", &PanelRow::rt)
        .def_readwrite("intermediate", &PanelRow::intermediate)
        .def_readwrite("rural", &PanelRow::rural)
        .def_readwrite("internal", &PanelRow::internal)
        .def_readwrite("inbound", &PanelRow::inbound)
        .def_readwrite("outbound", &PanelRow::outbound)
        .def_readwrite("internal_pca", &PanelRow::internal_pca)
        .def_readwrite("population", &PanelRow::population)
        .def_readwrite("density", &PanelRow::density);

    py::class_<Panel>(m, "Panel")
        .def(py::init<>())
        .def_readwrite("rows", &Panel::rows)
        .def_readonly("dropped_missing", &Panel::dropped_missing)
        .def_readonly("n_regions", &Panel::n_regions);

    py::class_<Coefficient>(m, "Coefficient")
        .def_readonly("name", &Coefficient::name)
        .def_readonly("estimate", &Coefficient::estimate)
        .def_readonly("se", &Coefficient::se)
        .def_readonly("t", &Coefficient::t)
        .def_readonly("p", &Coefficient::p)
        .def_readonly("stars", &Coefficient::stars)
        .def_readonly("fixed_effect", &Coefficient::fixed_effect);

    py::class_<RegressionResult>(m, "RegressionResult")
        .def_readonly("spec_id", &RegressionResult::spec_id)
        .def_readonly("coefficients", &RegressionResult::coefficients)
        .def_readonly("n_observations", &RegressionResult::n_observations)
        .def_readonly("r_squared", &RegressionResult::r_squared)
        .def_readonly("adj_r_squared", &RegressionResult::adj_r_squared)
        .def_readonly("fixed_effect_levels", &RegressionResult::fixed_effect_levels)
        .def("find", &RegressionResult::find, py::return_value_policy::reference_internal);

    py::enum_<Wave>(m, "Wave").value("First", Wave::First).value("Second", Wave::Second);
    py::enum_<PopTransform>(m, "PopTransform")
        .value("MinMax", PopTransform::MinMax)
        .value("Raw", PopTransform::Raw)
        .value("Log", PopTransform::Log);

    py::class_<PanelConfig>(m, "PanelConfig")
        .def(py::init<>())
        .def_readwrite("wave", &PanelConfig::wave)
        .def_readwrite("onset_window_days", &PanelConfig::onset_window_days)
        .def_readwrite("second_wave_after", &PanelConfig::second_wave_after)
        .def_readwrite("pop_transform", &PanelConfig::pop_transform)
        .def_readwrite("include_censored", &PanelConfig::include_censored);

    m.def("build_panel", &build_panel, py::arg("rt_weekly"), py::arg("mobility"),
          py::arg("registry"), py::arg("onsets"), py::arg("config"));
    m.def(
        "ols_fit",
        [](const Panel& panel, const std::vector<std::string>& regressors, bool fe,
           bool robust) {
            OlsOptions opt;
            opt.country_fixed_effects = fe;
            opt.robust_se = robust;
            return ols_fit(panel, regressors, opt);
        },
        py::arg("panel"), py::arg("regressors"), py::arg("country_fixed_effects") = true,
        py::arg("robust_se") = false);
    m.def("run_table", &run_table, py::arg("panel"), py::arg("robust_se") = false);
    m.def("table_formulas", &table_formulas);

    // simulator
    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_static("parse", &ScenarioConfig::parse)
        .def_readwrite("seed", &ScenarioConfig::seed)
        .def_readwrite("countries", &ScenarioConfig::countries)
        .def_readwrite("regions_urban", &ScenarioConfig::regions_urban)
        .def_readwrite("regions_intermediate", &ScenarioConfig::regions_intermediate)
        .def_readwrite("regions_rural", &ScenarioConfig::regions_rural)
        .def_readwrite("weeks", &ScenarioConfig::weeks)
        .def_readwrite("seed_cases", &ScenarioConfig::seed_cases)
        .def_readwrite("import_rate", &ScenarioConfig::import_rate)
        .def_readwrite("alpha", &ScenarioConfig::alpha)
        .def_readwrite("beta", &ScenarioConfig::beta)
        .def_readwrite("coupling_lag_weeks", &ScenarioConfig::coupling_lag_weeks)
        .def_readwrite("rt_noise_sd", &ScenarioConfig::rt_noise_sd);

    py::class_<GroundTruth>(m, "GroundTruth")
        .def_readonly("rt", &GroundTruth::rt)
        .def_readonly("excess_pct", &GroundTruth::excess_pct)
        .def_readonly("beta", &GroundTruth::beta)
        .def_readonly("coupling_lag_weeks", &GroundTruth::coupling_lag_weeks);

    py::class_<SimDataset>(m, "SimDataset")
        .def_readonly("regions", &SimDataset::regions)
        .def_readonly("cases", &SimDataset::cases)
        .def_readonly("deaths", &SimDataset::deaths)
        .def_readonly("mobility", &SimDataset::mobility)
        .def_readonly("truth", &SimDataset::truth);

    m.def("simulate_cases", &simulate_cases, py::arg("daily_r"), py::arg("gi"),
          py::arg("seed_cases"), py::arg("import_rate"), py::arg("seed"), py::arg("start"),
          py::arg("region_id"));
    m.def("simulate_panel", &simulate_panel);
    m.def("write_dataset", &write_dataset);

    m.attr("__version__") = "0.1.0";
}
