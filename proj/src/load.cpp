#include "epimob/load.hpp"

#include <algorithm>
#include <cstdlib>

#include "epimob/csv.hpp"
#include "epimob/error.hpp"

namespace epimob {

double parse_number(const std::string& text, const std::string& file, size_t row) {
    const char* begin = text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || text.empty()) {
        throw input_error("'" + file + "' row " + std::to_string(row) +
                          ": not a number: '" + text + "'");
    }
    return v;
}

namespace {

long parse_int(const std::string& text, const std::string& file, size_t row) {
    const char* begin = text.c_str();
    char* end = nullptr;
    long v = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0' || text.empty()) {
        throw input_error("'" + file + "' row " + std::to_string(row) +
                          ": not an integer: '" + text + "'");
    }
    return v;
}

[[noreturn]] void row_error(const std::string& file, size_t row, const std::string& what) {
    throw input_error("'" + file + "' row " + std::to_string(row) + ": " + what);
}

} // namespace

Registry load_regions(const std::filesystem::path& path) {
    CsvReader csv(path);
    size_t c_id = csv.col("region_id");
    size_t c_country = csv.col("country");
    size_t c_typ = csv.col("typology");
    size_t c_pop = csv.col("population");
    size_t c_area = csv.col("area_km2");
    bool has_density = false;
    size_t c_dens = 0;
    for (size_t i = 0; i < csv.header().size(); ++i) {
        if (csv.header()[i] == "density") {
            has_density = true;
            c_dens = i;
        }
    }

    Registry reg;
    std::vector<std::string> f;
    while (csv.next(f)) {
        Region r;
        r.region_id = f[c_id];
        r.country = f[c_country];
        try {
            r.typology = parse_typology(f[c_typ]);
            r.population = parse_number(f[c_pop], csv.path(), csv.line());
            r.area_km2 = parse_number(f[c_area], csv.path(), csv.line());
            if (has_density && !f[c_dens].empty()) {
                r.density = parse_number(f[c_dens], csv.path(), csv.line());
            }
            reg.add(std::move(r));
        } catch (const Error& e) {
            row_error(csv.path(), csv.line(), e.what());
        }
    }
    return reg;
}

std::map<std::string, DailySeries> load_daily_cases(const std::filesystem::path& path,
                                                    const Registry& registry) {
    CsvReader csv(path);
    size_t c_id = csv.col("region_id");
    size_t c_date = csv.col("date");
    size_t c_cases = csv.col("new_cases");

    // Collect (date, value) rows per region, then zero-fill gaps.
    std::map<std::string, std::vector<std::pair<int64_t, double>>> raw;
    std::vector<std::string> f;
    while (csv.next(f)) {
        const std::string& id = f[c_id];
        if (!registry.contains(id)) {
            row_error(csv.path(), csv.line(), "unregistered region_id '" + id + "'");
        }
        Date d;
        try {
            d = parse_date(f[c_date]);
        } catch (const Error& e) {
            row_error(csv.path(), csv.line(), e.what());
        }
        double v = parse_number(f[c_cases], csv.path(), csv.line());
        if (v < 0) {
            row_error(csv.path(), csv.line(), "negative case count");
        }
        raw[id].emplace_back(d.serial(), v);
    }

    std::map<std::string, DailySeries> out;
    for (auto& [id, rows] : raw) {
        std::sort(rows.begin(), rows.end());
        for (size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].first == rows[i - 1].first) {
                throw input_error("'" + csv.path() + "': duplicate date " +
                                  Date::from_serial(rows[i].first).to_string() +
                                  " for region '" + id + "'");
            }
        }
        DailySeries s;
        s.region_id = id;
        s.start = Date::from_serial(rows.front().first);
        s.values.assign(size_t(rows.back().first - rows.front().first) + 1, 0.0);
        for (const auto& [day, v] : rows) {
            s.values[size_t(day - rows.front().first)] = v;
        }
        out.emplace(id, std::move(s));
    }
    return out;
}

std::map<std::string, WeeklySeries> load_weekly_deaths(const std::filesystem::path& path,
                                                       const Registry& registry) {
    CsvReader csv(path);
    size_t c_id = csv.col("region_id");
    size_t c_year = csv.col("iso_year");
    size_t c_week = csv.col("iso_week");
    size_t c_deaths = csv.col("deaths");

    std::map<std::string, std::vector<std::pair<IsoWeek, double>>> raw;
    std::vector<std::string> f;
    while (csv.next(f)) {
        const std::string& id = f[c_id];
        if (!registry.contains(id)) {
            row_error(csv.path(), csv.line(), "unregistered region_id '" + id + "'");
        }
        int year = int(parse_int(f[c_year], csv.path(), csv.line()));
        int week = int(parse_int(f[c_week], csv.path(), csv.line()));
        if (week < 1 || week > weeks_in_iso_year(year)) {
            row_error(csv.path(), csv.line(),
                      "invalid ISO week " + std::to_string(week) + " for year " +
                          std::to_string(year));
        }
        double v = parse_number(f[c_deaths], csv.path(), csv.line());
        if (v < 0) {
            row_error(csv.path(), csv.line(), "negative death count");
        }
        raw[id].emplace_back(IsoWeek{year, week}, v);
    }

    std::map<std::string, WeeklySeries> out;
    for (auto& [id, rows] : raw) {
        std::sort(rows.begin(), rows.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        WeeklySeries s;
        s.region_id = id;
        for (const auto& [w, v] : rows) {
            if (!s.weeks.empty() && s.weeks.back() == w) {
                throw input_error("'" + csv.path() + "': duplicate week " + w.to_string() +
                                  " for region '" + id + "'");
            }
            s.push(w, v);
        }
        out.emplace(id, std::move(s));
    }
    return out;
}

void write_regions(const std::filesystem::path& path, const Registry& registry) {
    CsvWriter w(path, {"region_id", "country", "typology", "population", "area_km2", "density"});
    for (const auto& r : registry) {
        w.row({r.region_id, r.country, to_string(r.typology), fmt_num(r.population),
               fmt_num(r.area_km2), fmt_num(r.density)});
    }
}

void write_daily_cases(const std::filesystem::path& path,
                       const std::map<std::string, DailySeries>& cases) {
    CsvWriter w(path, {"region_id", "date", "new_cases"});
    for (const auto& [id, s] : cases) {
        for (size_t i = 0; i < s.values.size(); ++i) {
            w.row({id, s.date_at(i).to_string(), fmt_num(s.values[i])});
        }
    }
}

void write_weekly_deaths(const std::filesystem::path& path,
                         const std::map<std::string, WeeklySeries>& deaths) {
    CsvWriter w(path, {"region_id", "iso_year", "iso_week", "deaths"});
    for (const auto& [id, s] : deaths) {
        for (size_t i = 0; i < s.size(); ++i) {
            w.row({id, std::to_string(s.weeks[i].year), std::to_string(s.weeks[i].week),
                   fmt_num(s.values[i])});
        }
    }
}

} // namespace epimob
