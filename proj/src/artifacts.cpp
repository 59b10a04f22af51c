#include "epimob/artifacts.hpp"

#include <algorithm>
#include <set>

#include "epimob/csv.hpp"
#include "epimob/error.hpp"
#include "epimob/load.hpp"

namespace epimob {

namespace {

long to_int(const std::string& s, const CsvReader& csv) {
    return long(parse_number(s, csv.path(), csv.line()));
}

} // namespace

void write_rt_daily(const std::filesystem::path& path,
                    const std::map<std::string, RtSeries>& rt) {
    CsvWriter w(path, {"region_id", "date", "rt", "censored"});
    for (const auto& [id, s] : rt) {
        for (size_t i = 0; i < s.daily.size(); ++i) {
            if (!s.daily[i].has_value()) continue;
            w.row({id, s.start.plus_days(int64_t(i)).to_string(), fmt_num(*s.daily[i]),
                   s.censored[i] ? "1" : "0"});
        }
    }
}

void write_rt_weekly(const std::filesystem::path& path,
                     const std::map<std::string, WeeklyRt>& rt) {
    CsvWriter w(path, {"region_id", "week", "rt", "censored"});
    for (const auto& [id, s] : rt) {
        for (size_t i = 0; i < s.series.size(); ++i) {
            w.row({id, s.series.weeks[i].to_string(), fmt_num(s.series.values[i]),
                   s.censored[i] ? "1" : "0"});
        }
    }
}

std::map<std::string, WeeklyRt> read_rt_weekly(const std::filesystem::path& path) {
    CsvReader csv(path);
    size_t c_id = csv.col("region_id"), c_week = csv.col("week"), c_rt = csv.col("rt"),
           c_cen = csv.col("censored");
    std::map<std::string, WeeklyRt> out;
    std::vector<std::string> f;
    while (csv.next(f)) {
        WeeklyRt& s = out[f[c_id]];
        s.series.region_id = f[c_id];
        s.series.push(parse_iso_week(f[c_week]),
                      parse_number(f[c_rt], csv.path(), csv.line()));
        s.censored.push_back(f[c_cen] == "1");
    }
    return out;
}

void write_onsets(const std::filesystem::path& path,
                  const std::map<std::string, OnsetRecord>& onsets) {
    CsvWriter w(path, {"region_id", "onset_day", "reached"});
    for (const auto& [id, rec] : onsets) {
        w.row({id, rec.reached ? std::to_string(rec.onset_day) : "", rec.reached ? "1" : "0"});
    }
}

std::map<std::string, OnsetRecord> read_onsets(const std::filesystem::path& path) {
    CsvReader csv(path);
    size_t c_id = csv.col("region_id"), c_day = csv.col("onset_day"),
           c_reached = csv.col("reached");
    std::map<std::string, OnsetRecord> out;
    std::vector<std::string> f;
    while (csv.next(f)) {
        OnsetRecord rec;
        rec.region_id = f[c_id];
        rec.reached = f[c_reached] == "1";
        rec.onset_day = rec.reached ? int(to_int(f[c_day], csv)) : 0;
        out.emplace(rec.region_id, rec);
    }
    return out;
}

void write_aligned(const std::filesystem::path& path, const AlignedMatrix& aligned) {
    CsvWriter w(path, {"region_id", "day_since_first_case", "rt"});
    for (size_t r = 0; r < aligned.region_ids.size(); ++r) {
        for (size_t d = 0; d < aligned.rows[r].size(); ++d) {
            if (!aligned.rows[r][d].has_value()) continue;
            w.row({aligned.region_ids[r], std::to_string(d), fmt_num(*aligned.rows[r][d])});
        }
    }
}

std::map<std::string, OptSeries> read_aligned(const std::filesystem::path& path) {
    CsvReader csv(path);
    size_t c_id = csv.col("region_id"), c_day = csv.col("day_since_first_case"),
           c_rt = csv.col("rt");
    std::map<std::string, OptSeries> out;
    std::vector<std::string> f;
    while (csv.next(f)) {
        auto& row = out[f[c_id]];
        size_t day = size_t(to_int(f[c_day], csv));
        if (row.size() <= day) row.resize(day + 1);
        row[day] = parse_number(f[c_rt], csv.path(), csv.line());
    }
    return out;
}

void write_mobility(const std::filesystem::path& path, const MobilityTable& table) {
    CsvWriter w(path, {"region_id", "iso_week", "type", "raw", "per_capita", "normalized",
                       "flags", "per_capita_norm"});
    for (const auto& r : table.rows) {
        w.row({r.region_id, r.week.to_string(), to_string(r.type), fmt_num(r.raw),
               r.has_per_capita ? fmt_num(r.per_capita) : "",
               r.has_normalized ? fmt_num(r.normalized) : "", flags_to_string(r.flags),
               r.has_per_capita ? fmt_num(r.per_capita_norm) : ""});
    }
}

MobilityTable read_mobility(const std::filesystem::path& path) {
    CsvReader csv(path);
    size_t c_id = csv.col("region_id"), c_week = csv.col("iso_week"),
           c_type = csv.col("type"), c_raw = csv.col("raw"), c_pc = csv.col("per_capita"),
           c_norm = csv.col("normalized"), c_flags = csv.col("flags"),
           c_pcn = csv.col("per_capita_norm");
    MobilityTable out;
    std::vector<std::string> f;
    while (csv.next(f)) {
        MobilityTable::Row r;
        r.region_id = f[c_id];
        r.week = parse_iso_week(f[c_week]);
        r.type = parse_mobility_type(f[c_type]);
        r.raw = parse_number(f[c_raw], csv.path(), csv.line());
        if (!f[c_pc].empty()) {
            r.per_capita = parse_number(f[c_pc], csv.path(), csv.line());
            r.has_per_capita = true;
        }
        if (!f[c_norm].empty()) {
            r.normalized = parse_number(f[c_norm], csv.path(), csv.line());
            r.has_normalized = true;
        }
        if (!f[c_pcn].empty()) {
            r.per_capita_norm = parse_number(f[c_pcn], csv.path(), csv.line());
        }
        std::string flags = f[c_flags];
        if (flags.find("out_of_range") != std::string::npos) r.flags |= kFlagOutOfRange;
        if (flags.find("degenerate") != std::string::npos) r.flags |= kFlagDegenerate;
        out.rows.push_back(std::move(r));
    }
    std::sort(out.rows.begin(), out.rows.end(), [](const auto& a, const auto& b) {
        return std::make_tuple(a.region_id, int(a.type), a.week) <
               std::make_tuple(b.region_id, int(b.type), b.week);
    });
    return out;
}

void write_relative_change(const std::filesystem::path& path,
                           const std::vector<RelativeChangeSeries>& series) {
    CsvWriter w(path, {"region_id", "iso_week", "pct_change"});
    for (const auto& s : series) {
        for (size_t i = 0; i < s.weeks.size(); ++i) {
            w.row({s.region_id, s.weeks[i].to_string(), fmt_num(s.pct[i])});
        }
    }
}

std::vector<RelativeChangeSeries> read_relative_change(const std::filesystem::path& path) {
    CsvReader csv(path);
    size_t c_id = csv.col("region_id"), c_week = csv.col("iso_week"),
           c_pct = csv.col("pct_change");
    std::map<std::string, RelativeChangeSeries> map;
    std::vector<std::string> f;
    while (csv.next(f)) {
        auto& s = map[f[c_id]];
        s.region_id = f[c_id];
        s.weeks.push_back(parse_iso_week(f[c_week]));
        s.pct.push_back(parse_number(f[c_pct], csv.path(), csv.line()));
    }
    std::vector<RelativeChangeSeries> out;
    for (auto& [id, s] : map) out.push_back(std::move(s));
    return out;
}

void write_excess(const std::filesystem::path& path, const std::vector<ExcessSeries>& series) {
    CsvWriter w(path, {"region_id", "iso_week", "observed", "expected", "lower95", "upper95",
                       "excess", "excess_pct"});
    for (const auto& s : series) {
        for (size_t i = 0; i < s.weeks.size(); ++i) {
            w.row({s.region_id, s.weeks[i].to_string(), fmt_num(s.observed[i]),
                   fmt_num(s.expected[i]), fmt_num(s.lower95[i]), fmt_num(s.upper95[i]),
                   fmt_num(s.excess[i]), fmt_num(s.excess_pct[i])});
        }
    }
}

std::vector<ExcessSeries> read_excess(const std::filesystem::path& path) {
    CsvReader csv(path);
    size_t c_id = csv.col("region_id"), c_week = csv.col("iso_week"),
           c_obs = csv.col("observed"), c_exp = csv.col("expected"),
           c_lo = csv.col("lower95"), c_hi = csv.col("upper95"), c_ex = csv.col("excess"),
           c_pct = csv.col("excess_pct");
    std::map<std::string, ExcessSeries> map;
    std::vector<std::string> f;
    while (csv.next(f)) {
        auto& s = map[f[c_id]];
        s.region_id = f[c_id];
        s.weeks.push_back(parse_iso_week(f[c_week]));
        auto num = [&](size_t c) { return parse_number(f[c], csv.path(), csv.line()); };
        s.observed.push_back(num(c_obs));
        s.expected.push_back(num(c_exp));
        s.lower95.push_back(num(c_lo));
        s.upper95.push_back(num(c_hi));
        s.excess.push_back(num(c_ex));
        s.excess_pct.push_back(num(c_pct));
    }
    std::vector<ExcessSeries> out;
    for (auto& [id, s] : map) out.push_back(std::move(s));
    return out;
}

void write_aggregate_excess(const std::filesystem::path& path, const AggregateExcess& agg) {
    CsvWriter w(path, {"iso_week", "total_excess", "urban_median_pct",
                       "intermediate_median_pct", "rural_median_pct"});
    auto cell = [&](Typology t, size_t i) -> std::string {
        const auto& s = agg.median_excess_pct.at(t);
        if (i >= s.size() || !s[i].has_value()) return "";
        return fmt_num(*s[i]);
    };
    for (size_t i = 0; i < agg.weeks.size(); ++i) {
        w.row({agg.weeks[i].to_string(), fmt_num(agg.total_excess[i]),
               cell(Typology::Urban, i), cell(Typology::Intermediate, i),
               cell(Typology::Rural, i)});
    }
}

void write_panel(const std::filesystem::path& path, const Panel& panel) {
    CsvWriter w(path, {"region_id", "country", "week", "rt", "intermediate", "rural",
                       "internal", "inbound", "outbound", "internal_pca", "population",
                       "density"});
    for (const auto& r : panel.rows) {
        w.row({r.region_id, r.country, r.week.to_string(), fmt_num(r.rt),
               fmt_num(r.intermediate), fmt_num(r.rural), fmt_num(r.internal),
               fmt_num(r.inbound), fmt_num(r.outbound), fmt_num(r.internal_pca),
               fmt_num(r.population), fmt_num(r.density)});
    }
}

Panel read_panel(const std::filesystem::path& path) {
    CsvReader csv(path);
    size_t c_id = csv.col("region_id"), c_country = csv.col("country"),
           c_week = csv.col("week"), c_rt = csv.col("rt"), c_int = csv.col("intermediate"),
           c_rur = csv.col("rural"), c_in = csv.col("internal"), c_inb = csv.col("inbound"),
           c_out = csv.col("outbound"), c_pca = csv.col("internal_pca"),
           c_pop = csv.col("population"), c_dens = csv.col("density");
    Panel out;
    std::set<std::string> regions;
    std::vector<std::string> f;
    while (csv.next(f)) {
        auto num = [&](size_t c) { return parse_number(f[c], csv.path(), csv.line()); };
        PanelRow r;
        r.region_id = f[c_id];
        r.country = f[c_country];
        r.week = parse_iso_week(f[c_week]);
        r.rt = num(c_rt);
        r.intermediate = num(c_int);
        r.rural = num(c_rur);
        r.internal = num(c_in);
        r.inbound = num(c_inb);
        r.outbound = num(c_out);
        r.internal_pca = num(c_pca);
        r.population = num(c_pop);
        r.density = num(c_dens);
        regions.insert(r.region_id);
        out.rows.push_back(std::move(r));
    }
    out.n_regions = regions.size();
    return out;
}

void write_regression_csv(const std::filesystem::path& path,
                          const std::vector<TableColumn>& columns) {
    CsvWriter w(path, {"spec_id", "term", "estimate", "se", "t", "p", "stars", "n_obs",
                       "r2", "adj_r2", "fe_levels", "error"});
    for (const auto& col : columns) {
        if (!col.result) {
            w.row({col.spec_id, "", "", "", "", "", "", "", "", "", "", col.error});
            continue;
        }
        const auto& res = *col.result;
        for (const auto& c : res.coefficients) {
            w.row({col.spec_id, c.name, fmt_num(c.estimate), fmt_num(c.se), fmt_num(c.t),
                   fmt_num(c.p), std::string(size_t(c.stars), '*'),
                   std::to_string(res.n_observations), fmt_num(res.r_squared),
                   fmt_num(res.adj_r_squared), std::to_string(res.fixed_effect_levels), ""});
        }
    }
}

void write_lag_shifts(const std::filesystem::path& path,
                      const std::vector<LagShiftPoint>& points) {
    CsvWriter w(path, {"shift_weeks", "coefficient", "se", "lower95", "upper95", "n_obs"});
    for (const auto& p : points) {
        w.row({std::to_string(p.shift), fmt_num(p.coefficient), fmt_num(p.se),
               fmt_num(p.lower95), fmt_num(p.upper95), std::to_string(p.n_observations)});
    }
}

std::vector<LagShiftPoint> read_lag_shifts(const std::filesystem::path& path) {
    CsvReader csv(path);
    size_t c_shift = csv.col("shift_weeks"), c_coef = csv.col("coefficient"),
           c_se = csv.col("se"), c_lo = csv.col("lower95"), c_hi = csv.col("upper95"),
           c_n = csv.col("n_obs");
    std::vector<LagShiftPoint> out;
    std::vector<std::string> f;
    while (csv.next(f)) {
        auto num = [&](size_t c) { return parse_number(f[c], csv.path(), csv.line()); };
        LagShiftPoint p;
        p.shift = int(num(c_shift));
        p.coefficient = num(c_coef);
        p.se = num(c_se);
        p.lower95 = num(c_lo);
        p.upper95 = num(c_hi);
        p.n_observations = size_t(num(c_n));
        out.push_back(p);
    }
    return out;
}

} // namespace epimob
