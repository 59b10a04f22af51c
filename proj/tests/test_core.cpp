#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "epimob/calendar.hpp"
#include "epimob/csv.hpp"
#include "epimob/error.hpp"
#include "epimob/group.hpp"
#include "epimob/load.hpp"

using namespace epimob;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& content) {
    fs::path p = fs::temp_directory_path() / ("epimob_core_" + name);
    std::ofstream(p) << content;
    return p;
}

} // namespace

TEST_CASE("iso week of known dates") {
    // Frozen against python datetime.isocalendar().
    CHECK(iso_week_of(Date{2020, 1, 1}) == IsoWeek{2020, 1});
    CHECK(iso_week_of(Date{2021, 1, 1}) == IsoWeek{2020, 53});
    CHECK(iso_week_of(Date{2016, 1, 3}) == IsoWeek{2015, 53});
    CHECK(iso_week_of(Date{2015, 12, 28}) == IsoWeek{2015, 53});
    CHECK(iso_week_of(Date{2020, 12, 31}) == IsoWeek{2020, 53});
    CHECK(iso_week_of(Date{2021, 1, 4}) == IsoWeek{2021, 1});
    CHECK(iso_week_of(Date{1999, 12, 31}) == IsoWeek{1999, 52});
    CHECK(iso_week_of(Date{2020, 2, 29}) == IsoWeek{2020, 9});
    CHECK(iso_week_of(Date{1977, 1, 2}) == IsoWeek{1976, 53});

    CHECK(weeks_in_iso_year(2014) == 52);
    CHECK(weeks_in_iso_year(2015) == 53);
    CHECK(weeks_in_iso_year(2020) == 53);
    CHECK(weeks_in_iso_year(2021) == 52);
    CHECK(weeks_in_iso_year(2026) == 53);
}

TEST_CASE("week start dates and weekday") {
    CHECK(Date{2020, 1, 6}.iso_weekday() == 1);
    CHECK(Date{2020, 1, 5}.iso_weekday() == 7);
    CHECK(IsoWeek{2020, 2}.start_date() == Date{2020, 1, 6});
    CHECK(IsoWeek{2015, 53}.start_date() == Date{2015, 12, 28});

    // Round trip across year boundaries, including 53-week years.
    IsoWeek w{2014, 50};
    for (int i = 0; i < 400; ++i) {
        CHECK(iso_week_of(w.start_date()) == w);
        CHECK(w.plus_weeks(1) == w.next());
        CHECK(week_diff(w, w.plus_weeks(17)) == 17);
        w = w.next();
    }
}

TEST_CASE("date parsing rejects malformed input") {
    CHECK(parse_date("2020-02-29") == Date{2020, 2, 29});
    CHECK_THROWS_AS(parse_date("2021-02-29"), Error);
    CHECK_THROWS_AS(parse_date("2020-13-01"), Error);
    CHECK_THROWS_AS(parse_date("2020-1-1"), Error);
    CHECK_THROWS_AS(parse_date("garbage"), Error);
    CHECK_THROWS_AS(parse_iso_week("2020-W60"), Error);
    CHECK(parse_iso_week("2020-W53") == IsoWeek{2020, 53});
    CHECK_THROWS_AS(parse_iso_week("2021-W53"), Error);
}

TEST_CASE("csv reader enforces schema") {
    auto p = temp_file("schema.csv", "a,b,c\n1,2,3\n4,5\n");
    CsvReader csv(p);
    CHECK(csv.col("b") == 1);
    CHECK_THROWS_WITH_AS(csv.col("missing"), doctest::Contains("missing"), Error);
    std::vector<std::string> f;
    CHECK(csv.next(f));
    CHECK(f == std::vector<std::string>{"1", "2", "3"});
    CHECK_THROWS_WITH_AS(csv.next(f), doctest::Contains("row 3"), Error);
}

TEST_CASE("load_regions computes density and validates") {
    auto p = temp_file("regions.csv",
                       "region_id,country,typology,population,area_km2\n"
                       "IT001,IT,urban,1000000,500\n"
                       "IT002,IT,URBAN,200000,400\n"
                       "DE001,DE,Rural,50000,1000\n");
    Registry reg = load_regions(p);
    CHECK(reg.size() == 3);
    CHECK(reg.at("IT001").density == doctest::Approx(2000.0));
    CHECK(reg.at("IT002").typology == Typology::Urban); // case-insensitive
    CHECK(reg.at("DE001").typology == Typology::Rural);
    CHECK(reg.countries() == std::vector<std::string>{"DE", "IT"});

    // Derived density satisfies density * area = population.
    for (const auto& r : reg) {
        CHECK(r.density * r.area_km2 == doctest::Approx(r.population).epsilon(1e-9));
    }
}

TEST_CASE("load_regions rejects duplicates, bad typology, bad numbers") {
    auto dup = temp_file("regions_dup.csv",
                         "region_id,country,typology,population,area_km2\n"
                         "DE101,DE,urban,1000,10\n"
                         "DE101,DE,rural,2000,20\n");
    CHECK_THROWS_WITH_AS(load_regions(dup), doctest::Contains("DE101"), Error);

    auto typ = temp_file("regions_typ.csv",
                         "region_id,country,typology,population,area_km2\n"
                         "FR001,FR,metropolitan,1000,10\n");
    CHECK_THROWS_WITH_AS(load_regions(typ), doctest::Contains("row 2"), Error);

    auto pop = temp_file("regions_pop.csv",
                         "region_id,country,typology,population,area_km2\n"
                         "FR001,FR,urban,0,10\n");
    CHECK_THROWS_AS(load_regions(pop), Error);
}

namespace {

Registry small_registry() {
    Registry reg;
    reg.add({"AA001", "AA", Typology::Urban, 1000, 10, 0});
    reg.add({"AA002", "AA", Typology::Urban, 1000, 10, 0});
    reg.add({"AA003", "AA", Typology::Urban, 1000, 10, 0});
    reg.add({"BB001", "BB", Typology::Intermediate, 1000, 10, 0});
    reg.add({"BB002", "BB", Typology::Rural, 1000, 10, 0});
    return reg;
}

} // namespace

TEST_CASE("load_daily_cases fills gaps with zeros") {
    Registry reg = small_registry();
    auto p = temp_file("cases.csv",
                       "region_id,date,new_cases\n"
                       "AA001,2020-03-01,5\n"
                       "AA001,2020-03-03,7\n");
    auto cases = load_daily_cases(p, reg);
    const DailySeries& s = cases.at("AA001");
    CHECK(s.start == Date{2020, 3, 1});
    REQUIRE(s.values.size() == 3);
    CHECK(s.values[0] == 5);
    CHECK(s.values[1] == 0);
    CHECK(s.values[2] == 7);
}

TEST_CASE("load_daily_cases rejects bad rows with row numbers") {
    Registry reg = small_registry();
    auto neg = temp_file("cases_neg.csv",
                         "region_id,date,new_cases\n"
                         "AA001,2020-03-01,5\n"
                         "AA001,2020-03-02,-5\n");
    CHECK_THROWS_WITH_AS(load_daily_cases(neg, reg), doctest::Contains("row 3"), Error);

    auto unreg = temp_file("cases_unreg.csv",
                           "region_id,date,new_cases\n"
                           "ZZ999,2020-03-01,5\n");
    CHECK_THROWS_WITH_AS(load_daily_cases(unreg, reg), doctest::Contains("ZZ999"), Error);

    auto bad_date = temp_file("cases_date.csv",
                              "region_id,date,new_cases\n"
                              "AA001,2020-03-41,5\n");
    CHECK_THROWS_AS(load_daily_cases(bad_date, reg), Error);
}

TEST_CASE("bulk fixture: 10 regions x 300 days") {
    Registry reg;
    std::string csv = "region_id,date,new_cases\n";
    Date start{2020, 1, 1};
    for (int r = 0; r < 10; ++r) {
        std::string id = "R" + std::to_string(r);
        reg.add({id, "XX", Typology::Urban, 1000, 10, 0});
        for (int d = 0; d < 300; ++d) {
            csv += id + "," + start.plus_days(d).to_string() + "," + std::to_string(d % 7) + "\n";
        }
    }
    auto p = temp_file("cases_bulk.csv", csv);
    auto cases = load_daily_cases(p, reg);
    CHECK(cases.size() == 10);
    for (const auto& [id, s] : cases) {
        CHECK(s.values.size() == 300);
    }
}

TEST_CASE("loader round trip reproduces input up to gap zeros") {
    Registry reg = small_registry();
    auto p = temp_file("cases_rt.csv",
                       "region_id,date,new_cases\n"
                       "AA001,2020-03-01,5\n"
                       "AA001,2020-03-04,2.5\n"
                       "BB001,2020-02-10,1\n");
    auto first = load_daily_cases(p, reg);
    fs::path out = fs::temp_directory_path() / "epimob_core_cases_rt2.csv";
    write_daily_cases(out, first);
    auto second = load_daily_cases(out, reg);
    REQUIRE(second.size() == first.size());
    for (const auto& [id, s] : first) {
        CHECK(second.at(id).start == s.start);
        CHECK(second.at(id).values == s.values);
    }
}

TEST_CASE("load_weekly_deaths keeps missing weeks absent") {
    Registry reg = small_registry();
    auto p = temp_file("deaths.csv",
                       "region_id,iso_year,iso_week,deaths\n"
                       "AA001,2015,52,10\n"
                       "AA001,2015,53,11\n"
                       "AA001,2016,2,12\n");
    auto deaths = load_weekly_deaths(p, reg);
    const WeeklySeries& s = deaths.at("AA001");
    REQUIRE(s.size() == 3); // week 2016-W01 stays absent
    CHECK(s.weeks[1] == IsoWeek{2015, 53});
    CHECK(s.at(IsoWeek{2016, 1}) == std::nullopt);
    CHECK(s.at(IsoWeek{2016, 2}) == 12.0);

    auto bad = temp_file("deaths_bad.csv",
                         "region_id,iso_year,iso_week,deaths\n"
                         "AA001,2016,53,10\n"); // 2016 has 52 weeks
    CHECK_THROWS_AS(load_weekly_deaths(bad, reg), Error);
}

TEST_CASE("group_median basics") {
    Registry reg = small_registry();
    std::map<std::string, OptSeries> values;
    values["AA001"] = {1.0};
    values["AA002"] = {2.0};
    values["AA003"] = {4.0};
    auto med = group_median(values, reg);
    CHECK(med[Typology::Urban][0] == 2.0);
    CHECK_FALSE(med[Typology::Intermediate][0].has_value()); // empty group absent
    CHECK_FALSE(med[Typology::Rural][0].has_value());
}

TEST_CASE("group_median: single region group is the identity") {
    Registry reg = small_registry();
    std::map<std::string, OptSeries> values;
    values["BB002"] = {3.0, std::nullopt, 7.5};
    auto med = group_median(values, reg);
    CHECK(med[Typology::Rural][0] == 3.0);
    CHECK_FALSE(med[Typology::Rural][1].has_value());
    CHECK(med[Typology::Rural][2] == 7.5);
}

TEST_CASE("group_median matches sort oracle and is bounded") {
    Registry reg;
    for (int i = 0; i < 7; ++i) {
        reg.add({"U" + std::to_string(i), "XX", Typology::Urban, 1000, 10, 0});
    }
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-5, 5);
    const size_t len = 12;
    std::map<std::string, OptSeries> values;
    for (int i = 0; i < 7; ++i) {
        OptSeries s(len);
        for (size_t k = 0; k < len; ++k) {
            if (rng() % 4 != 0) s[k] = unif(rng);
        }
        values["U" + std::to_string(i)] = s;
    }
    auto med = group_median(values, reg);

    for (size_t k = 0; k < len; ++k) {
        std::vector<double> defined;
        for (const auto& [id, s] : values) {
            if (s[k].has_value()) defined.push_back(*s[k]);
        }
        if (defined.empty()) {
            CHECK_FALSE(med[Typology::Urban][k].has_value());
            continue;
        }
        std::sort(defined.begin(), defined.end());
        double expect = defined.size() % 2 == 1
                            ? defined[defined.size() / 2]
                            : 0.5 * (defined[defined.size() / 2 - 1] +
                                     defined[defined.size() / 2]);
        CHECK(*med[Typology::Urban][k] == doctest::Approx(expect));
        CHECK(*med[Typology::Urban][k] >= defined.front());
        CHECK(*med[Typology::Urban][k] <= defined.back());
    }
}

TEST_CASE("group_median rejects unregistered regions") {
    Registry reg = small_registry();
    std::map<std::string, OptSeries> values;
    values["nope"] = {1.0};
    CHECK_THROWS_AS(group_median(values, reg), Error);
}
