#include "epimob/pipeline.hpp"

#include <fstream>
#include <ostream>

#include "epimob/artifacts.hpp"
#include "epimob/error.hpp"
#include "epimob/figures.hpp"
#include "epimob/kv.hpp"
#include "epimob/load.hpp"
#include "epimob/manifest.hpp"

namespace epimob {

PopTransform parse_pop_transform(const std::string& token) {
    if (token == "minmax") return PopTransform::MinMax;
    if (token == "raw") return PopTransform::Raw;
    if (token == "log") return PopTransform::Log;
    throw input_error("unknown population transform '" + token + "' (minmax|raw|log)");
}

PipelineConfig PipelineConfig::parse(const std::filesystem::path& path) {
    KeyValues kv = KeyValues::from_file(path);
    PipelineConfig cfg;
    cfg.scenario = ScenarioConfig::from_kv(kv);

    cfg.input_regions = kv.take_string("input.regions", "");
    cfg.input_cases = kv.take_string("input.cases", "");
    cfg.input_deaths = kv.take_string("input.deaths", "");
    cfg.input_odm = kv.take_string("input.odm", "");

    cfg.align_window_days = kv.take_int("pipeline.align_window_days", cfg.align_window_days);
    cfg.onset_window_days = kv.take_int("pipeline.onset_window_days", cfg.onset_window_days);
    cfg.onset_threshold = kv.take_number("pipeline.onset_threshold", cfg.onset_threshold);
    std::string s;
    if (kv.take("pipeline.second_wave_after", s)) cfg.second_wave_after = parse_date(s);
    if (kv.take("pipeline.mobility_window", s)) {
        auto colon = s.find(':');
        if (colon == std::string::npos) {
            throw input_error("pipeline.mobility_window: expected YYYY-Www:YYYY-Www");
        }
        cfg.mobility_window_start = parse_iso_week(s.substr(0, colon));
        cfg.mobility_window_end = parse_iso_week(s.substr(colon + 1));
    }
    if (kv.take("pipeline.relative_to", s)) cfg.relative_to = parse_iso_week(s);
    cfg.shift_min = kv.take_int("pipeline.shift_min", cfg.shift_min);
    cfg.shift_max = kv.take_int("pipeline.shift_max", cfg.shift_max);
    cfg.mortality_knots = kv.take_int("pipeline.mortality_knots", cfg.mortality_knots);
    cfg.train_start_year = kv.take_int("pipeline.train_start", cfg.scenario.history_start_year);
    cfg.train_end_year = kv.take_int("pipeline.train_end", cfg.scenario.history_end_year);
    cfg.target_year = kv.take_int("pipeline.target_year", cfg.scenario.start_date.year);
    if (kv.take("pipeline.pop_transform", s)) cfg.pop_transform = parse_pop_transform(s);
    cfg.include_censored = kv.take_bool("pipeline.include_censored", cfg.include_censored);
    kv.finish();
    return cfg;
}

namespace {

template <typename F>
void stage(const std::string& name, std::ostream& log, F&& body) {
    log << "[" << name << "] ";
    log.flush();
    try {
        body();
    } catch (const Error& e) {
        log << "FAILED\n";
        throw Error(e.kind(), "stage " + name + ": " + e.what());
    }
    log << "done\n";
}

} // namespace

void run_pipeline(const PipelineConfig& cfg, const std::filesystem::path& config_path,
                  const std::filesystem::path& out_dir, std::ostream& log) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> warnings;
    const bool simulate_mode = cfg.input_regions.empty();

    Registry registry;
    std::map<std::string, DailySeries> cases;
    std::map<std::string, WeeklySeries> deaths;
    std::vector<OdmRecord> odm;

    if (simulate_mode) {
        stage("simulate", log, [&] {
            SimDataset ds = simulate_panel(cfg.scenario);
            write_dataset(ds, out_dir);
            registry = std::move(ds.regions);
            cases = std::move(ds.cases);
            deaths = std::move(ds.deaths);
            odm = std::move(ds.odm);
        });
    } else {
        stage("ingest", log, [&] {
            registry = load_regions(cfg.input_regions);
            write_regions(out_dir / "regions.csv", registry);
        });
    }

    // Rt estimation.
    std::map<std::string, WeeklyRt> rt_weekly;
    std::map<std::string, OnsetRecord> onsets;
    stage("rt", log, [&] {
        if (!simulate_mode) {
            if (cfg.input_cases.empty()) {
                throw input_error("ingest mode requires input.cases");
            }
            cases = load_daily_cases(cfg.input_cases, registry);
        }
        GenerationInterval gi = discretize_gamma(cfg.scenario.gi_mean_days,
                                                 cfg.scenario.gi_sd_days,
                                                 cfg.scenario.gi_max_lag);
        std::map<std::string, RtSeries> rt_daily;
        for (const auto& [id, series] : cases) {
            onsets.emplace(id, onset_day(series, cfg.onset_threshold));
            RtSeries rt = wallinga_teunis(series, gi);
            if (rt.daily.empty()) {
                warnings.push_back("rt: region '" + id + "' has no cases; skipped");
                continue;
            }
            rt_weekly.emplace(id, weekly_average(rt));
            rt_daily.emplace(id, std::move(rt));
        }
        AlignedMatrix aligned =
            align_by_onset(rt_daily, first_case_dates(cases), cfg.align_window_days);
        for (const auto& id : aligned.dropped) {
            warnings.push_back("align: region '" + id + "' dropped (no recorded case)");
        }
        write_rt_daily(out_dir / "rt_daily.csv", rt_daily);
        write_rt_weekly(out_dir / "rt_weekly.csv", rt_weekly);
        write_onsets(out_dir / "onsets.csv", onsets);
        write_aligned(out_dir / "rt_aligned.csv", aligned);
    });

    // Excess mortality.
    stage("excess", log, [&] {
        if (!simulate_mode) {
            if (cfg.input_deaths.empty()) {
                throw input_error("ingest mode requires input.deaths");
            }
            deaths = load_weekly_deaths(cfg.input_deaths, registry);
        }
        BaselineConfig bc;
        bc.knots = cfg.mortality_knots;
        std::vector<ExcessSeries> all;
        for (const auto& [id, series] : deaths) {
            WeeklySeries history, target;
            history.region_id = target.region_id = id;
            for (size_t i = 0; i < series.size(); ++i) {
                int year = series.weeks[i].year;
                if (year >= cfg.train_start_year && year <= cfg.train_end_year) {
                    history.push(series.weeks[i], series.values[i]);
                } else if (year == cfg.target_year) {
                    target.push(series.weeks[i], series.values[i]);
                }
            }
            if (history.size() < bc.min_weeks) {
                warnings.push_back("excess: region '" + id + "' skipped (" +
                                   std::to_string(history.size()) +
                                   " weeks of history, needs >= " +
                                   std::to_string(bc.min_weeks) + ")");
                continue;
            }
            if (target.size() == 0) {
                warnings.push_back("excess: region '" + id + "' has no target-year weeks");
                continue;
            }
            BaselineModel model = fit_baseline(history, bc);
            if (model.fallback) {
                warnings.push_back("excess: region '" + id +
                                   "' fell back to intercept+trend (singular design)");
            }
            BaselinePrediction pred = predict_baseline(model, target.weeks);
            all.push_back(excess(target, pred));
        }
        if (all.empty()) {
            throw input_error("no region had enough mortality history to fit a baseline");
        }
        write_excess(out_dir / "excess_per_region.csv", all);
        write_aggregate_excess(out_dir / "excess_aggregate.csv",
                               aggregate_excess(all, registry));
    });

    // Mobility indicators.
    MobilityTable mobility;
    stage("mobility", log, [&] {
        if (!simulate_mode) {
            if (cfg.input_odm.empty()) {
                throw input_error("ingest mode requires input.odm");
            }
            size_t dropped = 0;
            odm = load_odm(cfg.input_odm, registry, &dropped);
            if (dropped > 0) {
                warnings.push_back("odm: dropped " + std::to_string(dropped) +
                                   " records naming unregistered regions");
            }
        }
        mobility = weekly_aggregate(odm, registry);
        minmax_normalize(mobility, registry, cfg.mobility_window_start,
                         cfg.mobility_window_end);
        per_capita(mobility, registry, cfg.mobility_window_start, cfg.mobility_window_end);
        auto rel = relative_change(mobility, MobilityType::Internal, cfg.relative_to,
                                   &warnings);
        write_mobility(out_dir / "mobility.csv", mobility);
        write_relative_change(out_dir / "relative_change.csv", rel);
    });

    // Panels.
    Panel first, second;
    stage("panel", log, [&] {
        PanelConfig pc;
        pc.wave = Wave::First;
        pc.onset_window_days = cfg.onset_window_days;
        pc.pop_transform = cfg.pop_transform;
        pc.include_censored = cfg.include_censored;
        first = build_panel(rt_weekly, mobility, registry, onsets, pc);
        pc.wave = Wave::Second;
        pc.second_wave_after = cfg.second_wave_after;
        second = build_panel(rt_weekly, mobility, registry, onsets, pc);
        write_panel(out_dir / "panel_first.csv", first);
        write_panel(out_dir / "panel_second.csv", second);
        if (first.dropped_missing + second.dropped_missing > 0) {
            warnings.push_back("panel: dropped " + std::to_string(first.dropped_missing) +
                               " first-wave and " + std::to_string(second.dropped_missing) +
                               " second-wave region-weeks with missing fields");
        }
    });

    // Regressions.
    stage("regress", log, [&] {
        auto table1 = run_table(first);
        auto table2 = run_table(second);
        write_regression_csv(out_dir / "table1.csv", table1);
        write_regression_csv(out_dir / "table2.csv", table2);
        std::ofstream(out_dir / "table1.txt")
            << render_table(table1, "Rt on mobility and typology, first wave");
        std::ofstream(out_dir / "table2.txt")
            << render_table(table2, "Rt on mobility and typology, second wave");
        auto shifts_first =
            lag_shift_regress(first, mobility, cfg.shift_min, cfg.shift_max, &warnings);
        auto shifts_second =
            lag_shift_regress(second, mobility, cfg.shift_min, cfg.shift_max, &warnings);
        write_lag_shifts(out_dir / "shifts_first.csv", shifts_first);
        write_lag_shifts(out_dir / "shifts_second.csv", shifts_second);
    });

    stage("figures", log, [&] { emit_figures(out_dir, out_dir / "figures"); });

    RunManifest manifest;
    manifest.command = "pipeline";
    manifest.config_hash = fnv1a64_file(config_path);
    manifest.add_input(config_path);
    for (const std::string& in :
         {cfg.input_regions, cfg.input_cases, cfg.input_deaths, cfg.input_odm}) {
        if (!in.empty()) manifest.add_input(in);
    }
    manifest.add_outputs(out_dir);
    manifest.write(out_dir);

    if (!warnings.empty()) {
        log << warnings.size() << " warning(s):\n";
        for (const auto& w : warnings) log << "  " << w << "\n";
    }
}

} // namespace epimob
