#include "epimob/figures.hpp"

#include <algorithm>
#include <map>

#include "epimob/artifacts.hpp"
#include "epimob/csv.hpp"
#include "epimob/error.hpp"
#include "epimob/group.hpp"
#include "epimob/load.hpp"
#include "epimob/svg.hpp"

namespace epimob {

namespace {

void require(const std::filesystem::path& run_dir, const std::string& file,
             const std::string& command) {
    if (!std::filesystem::exists(run_dir / file)) {
        throw input_error("figures: missing '" + file + "' in '" + run_dir.string() +
                          "'; run the '" + command + "' command first");
    }
}

std::vector<std::pair<double, std::optional<double>>> opt_points(const OptSeries& s) {
    std::vector<std::pair<double, std::optional<double>>> out;
    for (size_t i = 0; i < s.size(); ++i) out.emplace_back(double(i), s[i]);
    return out;
}

} // namespace

void emit_figures(const std::filesystem::path& run_dir, const std::filesystem::path& out_dir) {
    require(run_dir, "regions.csv", "simulate");
    require(run_dir, "onsets.csv", "rt");
    require(run_dir, "rt_aligned.csv", "rt");
    require(run_dir, "excess_per_region.csv", "excess");
    require(run_dir, "mobility.csv", "mobility");
    require(run_dir, "relative_change.csv", "mobility");
    require(run_dir, "shifts_first.csv", "regress");
    require(run_dir, "shifts_second.csv", "regress");

    std::filesystem::create_directories(out_dir);
    Registry registry = load_regions(run_dir / "regions.csv");

    // fig1: pandemic onset by typology.
    {
        auto onsets = read_onsets(run_dir / "onsets.csv");
        CsvWriter csv(out_dir / "fig1.csv", {"region_id", "typology", "onset_day"});
        std::map<std::string, double> onset_values;
        for (const auto& [id, rec] : onsets) {
            if (!rec.reached) continue;
            csv.row({id, to_string(registry.at(id).typology), std::to_string(rec.onset_day)});
            onset_values[id] = double(rec.onset_day);
        }
        SvgChart chart("Pandemic onset by rural-urban typology", "typology (0=urban, 1=intermediate, 2=rural)",
                       "median days to 20 cases");
        auto medians = group_median_scalar(onset_values, registry);
        std::vector<std::pair<double, double>> bars;
        double x = 0;
        for (Typology t : {Typology::Urban, Typology::Intermediate, Typology::Rural}) {
            if (medians.count(t) && medians[t].has_value()) bars.emplace_back(x, *medians[t]);
            x += 1;
        }
        chart.add_bars("median onset day", bars);
        chart.write(out_dir / "fig1.svg");
    }

    // fig2: median aligned Rt by typology.
    {
        auto aligned = read_aligned(run_dir / "rt_aligned.csv");
        auto medians = group_median(aligned, registry);
        CsvWriter csv(out_dir / "fig2.csv", {"typology", "day_since_first_case", "median_rt"});
        SvgChart chart("Median Rt by typology, days since first case", "day since first case",
                       "median Rt");
        for (Typology t : {Typology::Urban, Typology::Intermediate, Typology::Rural}) {
            const OptSeries& s = medians[t];
            for (size_t d = 0; d < s.size(); ++d) {
                if (s[d].has_value()) {
                    csv.row({to_string(t), std::to_string(d), fmt_num(*s[d])});
                }
            }
            chart.add_line(to_string(t), opt_points(s));
        }
        chart.write(out_dir / "fig2.svg");
    }

    // fig3: total excess mortality and median excess_pct by typology.
    {
        auto per_region = read_excess(run_dir / "excess_per_region.csv");
        AggregateExcess agg = aggregate_excess(per_region, registry);
        CsvWriter csv(out_dir / "fig3.csv",
                      {"iso_week", "total_excess", "urban_median_pct",
                       "intermediate_median_pct", "rural_median_pct"});
        SvgChart chart("Weekly excess mortality", "week index", "excess (deaths) / excess (%)");
        std::vector<std::pair<double, double>> bars;
        for (size_t i = 0; i < agg.weeks.size(); ++i) {
            auto cell = [&](Typology t) -> std::string {
                const auto& v = agg.median_excess_pct.at(t);
                return i < v.size() && v[i].has_value() ? fmt_num(*v[i]) : "";
            };
            csv.row({agg.weeks[i].to_string(), fmt_num(agg.total_excess[i]),
                     cell(Typology::Urban), cell(Typology::Intermediate),
                     cell(Typology::Rural)});
            bars.emplace_back(double(i), agg.total_excess[i]);
        }
        chart.add_bars("total excess", bars);
        for (Typology t : {Typology::Urban, Typology::Intermediate, Typology::Rural}) {
            chart.add_line(std::string("median % ") + to_string(t),
                           opt_points(agg.median_excess_pct.at(t)));
        }
        chart.write(out_dir / "fig3.svg");
    }

    // fig4: median absolute and per-capita internal mobility by typology.
    {
        MobilityTable table = read_mobility(run_dir / "mobility.csv");
        std::vector<IsoWeek> weeks;
        for (const auto& r : table.rows) {
            if (r.type == MobilityType::Internal) weeks.push_back(r.week);
        }
        std::sort(weeks.begin(), weeks.end());
        weeks.erase(std::unique(weeks.begin(), weeks.end()), weeks.end());

        std::map<std::string, OptSeries> raw, pc;
        for (const auto& r : table.rows) {
            if (r.type != MobilityType::Internal) continue;
            size_t idx = size_t(std::lower_bound(weeks.begin(), weeks.end(), r.week) -
                                weeks.begin());
            auto& raw_row = raw[r.region_id];
            raw_row.resize(weeks.size());
            raw_row[idx] = r.raw;
            if (r.has_per_capita) {
                auto& pc_row = pc[r.region_id];
                pc_row.resize(weeks.size());
                pc_row[idx] = r.per_capita;
            }
        }
        auto raw_median = group_median(raw, registry);
        auto pc_median = group_median(pc, registry);

        CsvWriter csv(out_dir / "fig4.csv",
                      {"typology", "iso_week", "median_internal_raw",
                       "median_internal_per_capita"});
        SvgChart chart("Median internal mobility by typology", "week index",
                       "movements (raw, per capita)");
        for (Typology t : {Typology::Urban, Typology::Intermediate, Typology::Rural}) {
            for (size_t i = 0; i < weeks.size(); ++i) {
                const auto& rv = raw_median[t];
                const auto& pv = pc_median[t];
                bool has_raw = i < rv.size() && rv[i].has_value();
                bool has_pc = i < pv.size() && pv[i].has_value();
                if (!has_raw && !has_pc) continue;
                csv.row({to_string(t), weeks[i].to_string(), has_raw ? fmt_num(*rv[i]) : "",
                         has_pc ? fmt_num(*pv[i]) : ""});
            }
            chart.add_line(std::string("raw ") + to_string(t), opt_points(raw_median[t]));
        }
        chart.write(out_dir / "fig4.svg");
    }

    // fig5: relative change of internal mobility per region.
    {
        auto rel = read_relative_change(run_dir / "relative_change.csv");
        CsvWriter csv(out_dir / "fig5.csv", {"region_id", "iso_week", "pct_change"});
        SvgChart chart("Internal mobility vs reference week", "week index", "% change");
        size_t plotted = 0;
        for (const auto& s : rel) {
            for (size_t i = 0; i < s.weeks.size(); ++i) {
                csv.row({s.region_id, s.weeks[i].to_string(), fmt_num(s.pct[i])});
            }
            if (plotted < 30) {
                std::vector<std::pair<double, std::optional<double>>> pts;
                for (size_t i = 0; i < s.pct.size(); ++i) pts.emplace_back(double(i), s.pct[i]);
                chart.add_line(s.region_id, pts);
                ++plotted;
            }
        }
        chart.write(out_dir / "fig5.svg");
    }

    // fig6: lag-shift regression coefficients.
    {
        CsvWriter csv(out_dir / "fig6.csv",
                      {"wave", "shift_weeks", "coefficient", "lower95", "upper95"});
        SvgChart chart("Internal-mobility coefficient by weekly shift", "shift (weeks)",
                       "coefficient");
        for (const auto& [wave, file] :
             {std::pair<std::string, std::string>{"first", "shifts_first.csv"},
              std::pair<std::string, std::string>{"second", "shifts_second.csv"}}) {
            auto points = read_lag_shifts(run_dir / file);
            std::vector<std::pair<double, std::optional<double>>> mid, lo, hi;
            for (const auto& p : points) {
                csv.row({wave, std::to_string(p.shift), fmt_num(p.coefficient),
                         fmt_num(p.lower95), fmt_num(p.upper95)});
                mid.emplace_back(double(p.shift), p.coefficient);
                lo.emplace_back(double(p.shift), p.lower95);
                hi.emplace_back(double(p.shift), p.upper95);
            }
            chart.add_line(wave + " wave", mid);
            chart.add_line(wave + " 95% low", lo);
            chart.add_line(wave + " 95% high", hi);
        }
        chart.write(out_dir / "fig6.svg");
    }
}

} // namespace epimob
