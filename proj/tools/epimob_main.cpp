// Command-line entry point: simulate, rt, excess, mobility, panel, regress,
// figures, pipeline. Exit codes: 0 success, 2 input error, 3 computation
// error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "epimob/artifacts.hpp"
#include "epimob/error.hpp"
#include "epimob/figures.hpp"
#include "epimob/gentime.hpp"
#include "epimob/load.hpp"
#include "epimob/manifest.hpp"
#include "epimob/mobility.hpp"
#include "epimob/mortality.hpp"
#include "epimob/pipeline.hpp"
#include "epimob/regression.hpp"
#include "epimob/rt.hpp"
#include "epimob/simulator.hpp"

namespace fs = std::filesystem;
using namespace epimob;

namespace {

void finish_manifest(RunManifest& manifest, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    manifest.add_outputs(out_dir);
    manifest.write(out_dir);
}

std::pair<IsoWeek, IsoWeek> parse_week_range(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw input_error("expected week range YYYY-Www:YYYY-Www, got '" + text + "'");
    }
    return {parse_iso_week(text.substr(0, colon)), parse_iso_week(text.substr(colon + 1))};
}

std::pair<int, int> parse_shift_range(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw input_error("expected shift range MIN:MAX, got '" + text + "'");
    }
    return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<uint64_t> seed) {
    ScenarioConfig cfg = ScenarioConfig::parse(config_path);
    if (seed) cfg.seed = *seed;
    SimDataset ds = simulate_panel(cfg);
    write_dataset(ds, out_dir);
    write_mobility(fs::path(out_dir) / "truth_mobility.csv", ds.mobility);

    RunManifest manifest;
    manifest.command = "simulate";
    manifest.config_hash = fnv1a64_file(config_path);
    manifest.add_input(config_path);
    finish_manifest(manifest, out_dir);
    std::cout << "simulated " << ds.regions.size() << " regions, " << cfg.weeks
              << " weeks -> " << out_dir << "\n";
    return 0;
}

int cmd_rt(const std::string& cases_path, const std::string& regions_path, double gi_mean,
           double gi_sd, int gi_max_lag, bool weekly, int align_onset, double threshold,
           const std::string& out_dir) {
    Registry registry = load_regions(regions_path);
    auto cases = load_daily_cases(cases_path, registry);
    GenerationInterval gi = discretize_gamma(gi_mean, gi_sd, gi_max_lag);

    std::map<std::string, RtSeries> daily;
    std::map<std::string, WeeklyRt> weekly_rt;
    std::map<std::string, OnsetRecord> onsets;
    for (const auto& [id, series] : cases) {
        onsets.emplace(id, onset_day(series, threshold));
        RtSeries rt = wallinga_teunis(series, gi);
        if (rt.daily.empty()) continue;
        if (weekly) weekly_rt.emplace(id, weekly_average(rt));
        daily.emplace(id, std::move(rt));
    }

    fs::create_directories(out_dir);
    write_rt_daily(fs::path(out_dir) / "rt_daily.csv", daily);
    write_onsets(fs::path(out_dir) / "onsets.csv", onsets);
    if (weekly) write_rt_weekly(fs::path(out_dir) / "rt_weekly.csv", weekly_rt);
    if (align_onset > 0) {
        AlignedMatrix aligned = align_by_onset(daily, first_case_dates(cases), align_onset);
        write_aligned(fs::path(out_dir) / "rt_aligned.csv", aligned);
        for (const auto& id : aligned.dropped) {
            std::cerr << "warning: region '" << id << "' dropped from alignment (no case)\n";
        }
    }

    RunManifest manifest;
    manifest.command = "rt";
    manifest.add_input(cases_path);
    manifest.add_input(regions_path);
    finish_manifest(manifest, out_dir);
    return 0;
}

int cmd_excess(const std::string& deaths_path, const std::string& regions_path,
               int train_start, int train_end, int target_year, int knots,
               const std::string& out_dir) {
    Registry registry = load_regions(regions_path);
    auto deaths = load_weekly_deaths(deaths_path, registry);

    BaselineConfig bc;
    bc.knots = knots;
    std::vector<ExcessSeries> all;
    for (const auto& [id, series] : deaths) {
        WeeklySeries history, target;
        history.region_id = target.region_id = id;
        for (size_t i = 0; i < series.size(); ++i) {
            int year = series.weeks[i].year;
            if (year >= train_start && year <= train_end) {
                history.push(series.weeks[i], series.values[i]);
            } else if (year == target_year) {
                target.push(series.weeks[i], series.values[i]);
            }
        }
        if (history.size() < bc.min_weeks || target.size() == 0) {
            std::cerr << "warning: region '" << id << "' skipped ("
                      << history.size() << " history weeks, " << target.size()
                      << " target weeks)\n";
            continue;
        }
        BaselineModel model = fit_baseline(history, bc);
        if (model.fallback) {
            std::cerr << "warning: region '" << id << "' fell back to intercept+trend\n";
        }
        all.push_back(excess(target, predict_baseline(model, target.weeks)));
    }
    if (all.empty()) {
        throw input_error("no region had enough history (" + std::to_string(train_start) +
                          "-" + std::to_string(train_end) + ") and target-year data");
    }

    fs::create_directories(out_dir);
    write_excess(fs::path(out_dir) / "excess_per_region.csv", all);
    write_aggregate_excess(fs::path(out_dir) / "excess_aggregate.csv",
                           aggregate_excess(all, registry));

    RunManifest manifest;
    manifest.command = "excess";
    manifest.add_input(deaths_path);
    manifest.add_input(regions_path);
    finish_manifest(manifest, out_dir);
    return 0;
}

int cmd_mobility(const std::string& odm_path, const std::string& regions_path,
                 const std::string& window, bool with_per_capita,
                 const std::string& relative_to, bool aggregates,
                 const std::string& out_dir) {
    Registry registry = load_regions(regions_path);
    size_t dropped = 0;
    auto records = load_odm(odm_path, registry, &dropped);
    if (dropped > 0) {
        std::cerr << "warning: dropped " << dropped << " ODM records naming unregistered "
                  << "regions\n";
    }
    auto [win_start, win_end] = parse_week_range(window);
    MobilityTable table = weekly_aggregate(records, registry);
    minmax_normalize(table, registry, win_start, win_end, aggregates);
    if (with_per_capita) per_capita(table, registry, win_start, win_end, aggregates);

    fs::create_directories(out_dir);
    write_mobility(fs::path(out_dir) / "mobility.csv", table);
    if (!relative_to.empty()) {
        std::vector<std::string> warnings;
        auto rel = relative_change(table, MobilityType::Internal,
                                   parse_iso_week(relative_to), &warnings);
        write_relative_change(fs::path(out_dir) / "relative_change.csv", rel);
        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    }

    RunManifest manifest;
    manifest.command = "mobility";
    manifest.add_input(odm_path);
    manifest.add_input(regions_path);
    finish_manifest(manifest, out_dir);
    return 0;
}

int cmd_panel(const std::string& rt_path, const std::string& mobility_path,
              const std::string& regions_path, const std::string& cases_path,
              const std::string& wave, int window_days, const std::string& after,
              double threshold, const std::string& pop_transform, bool include_censored,
              const std::string& out_dir) {
    Registry registry = load_regions(regions_path);
    auto rt_weekly = read_rt_weekly(rt_path);
    MobilityTable mobility = read_mobility(mobility_path);

    PanelConfig pc;
    pc.wave = wave == "second" ? Wave::Second : Wave::First;
    pc.onset_window_days = window_days;
    pc.second_wave_after = parse_date(after);
    pc.pop_transform = parse_pop_transform(pop_transform);
    pc.include_censored = include_censored;

    std::map<std::string, OnsetRecord> onsets;
    if (pc.wave == Wave::First) {
        if (cases_path.empty()) {
            throw input_error("first-wave panels need --cases to locate each onset");
        }
        for (const auto& [id, series] : load_daily_cases(cases_path, registry)) {
            onsets.emplace(id, onset_day(series, threshold));
        }
    }

    Panel panel = build_panel(rt_weekly, mobility, registry, onsets, pc);
    fs::create_directories(out_dir);
    fs::path out = fs::path(out_dir) / ("panel_" + wave + ".csv");
    write_panel(out, panel);
    std::cout << "panel: " << panel.rows.size() << " rows, " << panel.n_regions
              << " regions, " << panel.dropped_missing << " region-weeks dropped\n";

    RunManifest manifest;
    manifest.command = "panel";
    manifest.add_input(rt_path);
    manifest.add_input(mobility_path);
    manifest.add_input(regions_path);
    if (!cases_path.empty()) manifest.add_input(cases_path);
    finish_manifest(manifest, out_dir);
    return 0;
}

int cmd_regress(const std::string& panel_path, int table, const std::string& shifts,
                const std::string& mobility_path, bool robust, const std::string& out_dir) {
    Panel panel = read_panel(panel_path);
    auto columns = run_table(panel, robust);
    std::string title = table == 2 ? "Rt on mobility and typology, second wave"
                                   : "Rt on mobility and typology, first wave";
    std::string rendered = render_table(columns, title);
    std::cout << rendered;

    fs::create_directories(out_dir);
    std::string stem = "table" + std::to_string(table);
    write_regression_csv(fs::path(out_dir) / (stem + ".csv"), columns);
    std::ofstream(fs::path(out_dir) / (stem + ".txt")) << rendered;

    if (!shifts.empty()) {
        if (mobility_path.empty()) {
            throw input_error("--shifts needs --mobility to re-join shifted weeks");
        }
        auto [lo, hi] = parse_shift_range(shifts);
        MobilityTable mobility = read_mobility(mobility_path);
        std::vector<std::string> warnings;
        auto points = lag_shift_regress(panel, mobility, lo, hi, &warnings);
        write_lag_shifts(fs::path(out_dir) / "shifts.csv", points);
        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    }

    RunManifest manifest;
    manifest.command = "regress";
    manifest.add_input(panel_path);
    if (!mobility_path.empty()) manifest.add_input(mobility_path);
    finish_manifest(manifest, out_dir);
    return 0;
}

int cmd_figures(const std::string& run_dir, std::string out_dir) {
    if (out_dir.empty()) out_dir = (fs::path(run_dir) / "figures").string();
    emit_figures(run_dir, out_dir);

    RunManifest manifest;
    manifest.command = "figures";
    finish_manifest(manifest, out_dir);
    std::cout << "figures -> " << out_dir << "\n";
    return 0;
}

int cmd_pipeline(const std::string& config_path, const std::string& out_dir,
                 std::optional<uint64_t> seed) {
    PipelineConfig cfg = PipelineConfig::parse(config_path);
    if (seed) cfg.scenario.seed = *seed;
    run_pipeline(cfg, config_path, out_dir, std::cout);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regional epidemic analytics: Rt estimation, excess-mortality baselines, "
                 "mobility indicators, panel regressions, and a synthetic-panel simulator"};
    app.require_subcommand(1);

    // simulate
    std::string sim_config, sim_out = "out", default_config_path;
    std::optional<uint64_t> sim_seed;
    auto* sim = app.add_subcommand("simulate", "Generate a synthetic dataset with ground truth");
    sim->add_option("--config", sim_config, "Scenario config (key = value)");
    sim->add_option("--out", sim_out, "Output directory");
    sim->add_option("--seed", sim_seed, "Override the config seed");
    sim->add_option("--write-default-config", default_config_path,
                    "Write a fully documented default config and exit");

    // rt
    std::string rt_cases, rt_regions, rt_out = "out";
    double gi_mean = 0, gi_sd = 0, rt_threshold = 20;
    int gi_max_lag = 21, align_onset = 0;
    bool rt_weekly = false;
    auto* rt = app.add_subcommand("rt", "Time-dependent reproduction number estimation");
    rt->add_option("--cases", rt_cases, "Daily cases CSV")->required();
    rt->add_option("--regions", rt_regions, "Regions CSV")->required();
    rt->add_option("--gi-mean", gi_mean, "Generation interval mean (days)")->required();
    rt->add_option("--gi-sd", gi_sd, "Generation interval sd (days)")->required();
    rt->add_option("--gi-max-lag", gi_max_lag, "Generation interval support (days)");
    rt->add_flag("--weekly", rt_weekly, "Also write weekly averages");
    rt->add_option("--align-onset", align_onset,
                   "Also write Rt aligned to each region's first case (window days)");
    rt->add_option("--onset-threshold", rt_threshold, "Cumulative cases defining onset");
    rt->add_option("--out", rt_out, "Output directory");

    // excess
    std::string ex_deaths, ex_regions, ex_out = "out";
    int train_start = 2011, train_end = 2019, target_year = 2020, knots = 12;
    auto* ex = app.add_subcommand("excess", "Mortality baseline and excess computation");
    ex->add_option("--deaths", ex_deaths, "Weekly deaths CSV")->required();
    ex->add_option("--regions", ex_regions, "Regions CSV")->required();
    ex->add_option("--train-start", train_start, "First training year");
    ex->add_option("--train-end", train_end, "Last training year");
    ex->add_option("--target-year", target_year, "Year to compare against the baseline");
    ex->add_option("--knots", knots, "Cyclic spline basis size");
    ex->add_option("--out", ex_out, "Output directory");

    // mobility
    std::string mob_odm, mob_regions, mob_window = "2020-W06:2020-W52", mob_rel,
                mob_out = "out";
    bool mob_pc = false, mob_agg = false;
    auto* mob = app.add_subcommand("mobility", "ODM harmonization into weekly indicators");
    mob->add_option("--odm", mob_odm, "Origin-destination CSV")->required();
    mob->add_option("--regions", mob_regions, "Regions CSV")->required();
    mob->add_option("--window", mob_window, "Normalization reference window (start:end)");
    mob->add_flag("--per-capita", mob_pc, "Also compute per-capita indicators");
    mob->add_option("--relative-to", mob_rel, "Reference week for percent-change output");
    mob->add_flag("--normalize-aggregates", mob_agg,
                  "Score per-region window totals instead of region-weeks");
    mob->add_option("--out", mob_out, "Output directory");

    // panel
    std::string pan_rt, pan_mob, pan_regions, pan_cases, pan_wave = "first",
                pan_after = "2020-08-31", pan_transform = "minmax", pan_out = "out";
    int pan_window = 28;
    double pan_threshold = 20;
    bool pan_censored = false;
    auto* pan = app.add_subcommand("panel", "Build a regression panel from Rt and mobility");
    pan->add_option("--rt-weekly", pan_rt, "Weekly Rt CSV (from the rt command)")->required();
    pan->add_option("--mobility", pan_mob, "Mobility CSV (from the mobility command)")
        ->required();
    pan->add_option("--regions", pan_regions, "Regions CSV")->required();
    pan->add_option("--cases", pan_cases, "Daily cases CSV (first wave only)");
    pan->add_option("--wave", pan_wave, "first|second")
        ->check(CLI::IsMember({"first", "second"}));
    pan->add_option("--window-days", pan_window, "First-wave days since onset");
    pan->add_option("--after", pan_after, "Second-wave cutoff date");
    pan->add_option("--onset-threshold", pan_threshold, "Cumulative cases defining onset");
    pan->add_option("--pop-transform", pan_transform, "minmax|raw|log");
    pan->add_flag("--include-censored", pan_censored, "Keep right-censored weekly Rt");
    pan->add_option("--out", pan_out, "Output directory");

    // regress
    std::string reg_panel, reg_shifts, reg_mob, reg_out = "out";
    int reg_table = 1;
    bool reg_robust = false;
    auto* reg = app.add_subcommand("regress", "Fixed-effects OLS table and lag shifts");
    reg->add_option("--panel", reg_panel, "Panel CSV")->required();
    reg->add_option("--table", reg_table, "Table label (1=first wave, 2=second wave)")
        ->check(CLI::IsMember({1, 2}));
    reg->add_option("--shifts", reg_shifts, "Lag-shift range MIN:MAX (e.g. -3:3)");
    reg->add_option("--mobility", reg_mob, "Mobility CSV (needed with --shifts)");
    reg->add_flag("--robust", reg_robust, "Heteroskedasticity-consistent (HC1) errors");
    reg->add_option("--out", reg_out, "Output directory");

    // figures
    std::string fig_run, fig_out;
    auto* fig = app.add_subcommand("figures", "Render figure CSVs and SVGs from a run");
    fig->add_option("--run", fig_run, "Pipeline run directory")->required();
    fig->add_option("--out", fig_out, "Output directory (default <run>/figures)");

    // pipeline
    std::string pipe_config, pipe_out = "out";
    std::optional<uint64_t> pipe_seed;
    auto* pipe = app.add_subcommand("pipeline", "simulate/ingest -> rt -> excess -> mobility "
                                                "-> panel -> regress -> figures");
    pipe->add_option("--config", pipe_config, "Pipeline config")->required();
    pipe->add_option("--out", pipe_out, "Run directory");
    pipe->add_option("--seed", pipe_seed, "Override the config seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            if (!default_config_path.empty()) {
                write_default_config(default_config_path);
                std::cout << "wrote " << default_config_path << "\n";
                return 0;
            }
            if (sim_config.empty()) {
                throw input_error("simulate needs --config (or --write-default-config)");
            }
            return cmd_simulate(sim_config, sim_out, sim_seed);
        }
        if (rt->parsed()) {
            return cmd_rt(rt_cases, rt_regions, gi_mean, gi_sd, gi_max_lag, rt_weekly,
                          align_onset, rt_threshold, rt_out);
        }
        if (ex->parsed()) {
            return cmd_excess(ex_deaths, ex_regions, train_start, train_end, target_year,
                              knots, ex_out);
        }
        if (mob->parsed()) {
            return cmd_mobility(mob_odm, mob_regions, mob_window, mob_pc, mob_rel, mob_agg,
                                mob_out);
        }
        if (pan->parsed()) {
            return cmd_panel(pan_rt, pan_mob, pan_regions, pan_cases, pan_wave, pan_window,
                             pan_after, pan_threshold, pan_transform, pan_censored, pan_out);
        }
        if (reg->parsed()) {
            return cmd_regress(reg_panel, reg_table, reg_shifts, reg_mob, reg_robust, reg_out);
        }
        if (fig->parsed()) {
            return cmd_figures(fig_run, fig_out);
        }
        if (pipe->parsed()) {
            return cmd_pipeline(pipe_config, pipe_out, pipe_seed);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::InvalidInput ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
