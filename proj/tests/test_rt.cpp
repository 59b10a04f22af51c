#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "epimob/error.hpp"
#include "epimob/rt.hpp"

using namespace epimob;

namespace {

GenerationInterval point_mass_at_1() {
    GenerationInterval gi;
    gi.pmf = {1.0, 0.0}; // structural max_lag 2, support ends at lag 1
    gi.mean_days = 1.0;
    gi.sd_days = 0.0;
    return gi;
}

DailySeries series(std::vector<double> values, Date start = Date{2020, 2, 3}) {
    DailySeries s;
    s.region_id = "R";
    s.start = start;
    s.values = std::move(values);
    return s;
}

// Direct summation oracle for Rt(t): builds every p(t->j) explicitly.
std::vector<std::optional<double>> brute_force_rt(const std::vector<double>& c,
                                                  const GenerationInterval& gi) {
    int n = int(c.size());
    auto out = std::vector<std::optional<double>>(size_t(n));
    for (int t = 0; t < n; ++t) {
        if (!(c[size_t(t)] > 0)) continue;
        double total = 0.0;
        for (int j = t + 1; j < n; ++j) {
            double denom = 0.0;
            for (int k = 0; k < j; ++k) {
                denom += c[size_t(k)] * gi.w(j - k);
            }
            if (denom <= 0.0 || !(c[size_t(j)] > 0)) continue;
            double p = c[size_t(t)] * gi.w(j - t) / denom;
            total += p * c[size_t(j)];
        }
        out[size_t(t)] = total / c[size_t(t)];
    }
    return out;
}

} // namespace

TEST_CASE("single transmission pair gives Rt = 1") {
    RtSeries rt = wallinga_teunis(series({1, 1}), point_mass_at_1());
    REQUIRE(rt.daily.size() == 2);
    CHECK(*rt.daily[0] == doctest::Approx(1.0));
    CHECK_FALSE(rt.censored[0]); // day 0's infectee window is fully observed
    CHECK(rt.censored[1]);
}

TEST_CASE("constant incidence sits at the renewal fixed point") {
    GenerationInterval gi = discretize_gamma(4.0, 2.0, 15);
    std::vector<double> c(100, 37.0);
    RtSeries rt = wallinga_teunis(series(c), gi);
    auto oracle = brute_force_rt(c, gi);
    for (int t = 0; t < 100; ++t) {
        REQUIRE(rt.daily[size_t(t)].has_value());
        CHECK(*rt.daily[size_t(t)] == doctest::Approx(*oracle[size_t(t)]).epsilon(1e-12));
        if (t >= gi.max_lag() && t < 100 - gi.max_lag()) {
            CHECK(*rt.daily[size_t(t)] == doctest::Approx(1.0).epsilon(0.05));
            CHECK_FALSE(rt.censored[size_t(t)]);
        }
    }
}

TEST_CASE("exponential growth matches the Lotka-Euler value") {
    GenerationInterval gi = discretize_gamma(5.0, 2.0, 20);
    const double r = 0.1;
    std::vector<double> c;
    for (int t = 0; t < 120; ++t) c.push_back(std::exp(r * t));
    RtSeries rt = wallinga_teunis(series(c), gi);

    // Independent value from the pmf: R = 1 / sum_k w(k) exp(-r k).
    double denom = 0.0;
    for (int k = 1; k <= gi.max_lag(); ++k) denom += gi.w(k) * std::exp(-r * k);
    double expected = 1.0 / denom;

    for (int t = gi.max_lag(); t < 120 - gi.max_lag(); ++t) {
        CHECK(*rt.daily[size_t(t)] == doctest::Approx(expected).epsilon(0.01));
    }
}

TEST_CASE("attribution probabilities sum to one over infectors") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unif(0.0, 40.0);
    GenerationInterval gi = discretize_gamma(4.0, 2.5, 17);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> c(60);
        for (double& v : c) v = rng() % 5 == 0 ? 0.0 : std::floor(unif(rng));

        for (int j = 1; j < int(c.size()); ++j) {
            double denom = 0.0;
            for (int k = 0; k < j; ++k) denom += c[size_t(k)] * gi.w(j - k);
            if (denom <= 0.0) continue;
            double total = 0.0;
            for (int t = 0; t < j; ++t) {
                if (c[size_t(t)] > 0) total += c[size_t(t)] * gi.w(j - t) / denom;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("scale invariance in the case counts") {
    GenerationInterval gi = discretize_gamma(4.0, 2.0, 15);
    std::mt19937_64 rng(5);
    std::vector<double> c(50);
    for (double& v : c) v = double(rng() % 30);
    c[0] = 3; // ensure some cases
    RtSeries a = wallinga_teunis(series(c), gi);
    for (double& v : c) v *= 739.25;
    RtSeries b = wallinga_teunis(series(c), gi);
    for (size_t t = 0; t < c.size(); ++t) {
        CHECK(a.daily[t].has_value() == b.daily[t].has_value());
        if (a.daily[t]) {
            CHECK(*a.daily[t] == doctest::Approx(*b.daily[t]).epsilon(1e-9));
        }
    }
}

TEST_CASE("all-zero series yields an empty RtSeries") {
    RtSeries rt = wallinga_teunis(series({0, 0, 0, 0}), point_mass_at_1());
    CHECK(rt.daily.empty());
    CHECK_THROWS_AS(weekly_average(rt), Error);
}

TEST_CASE("zero-case days have no Rt value") {
    GenerationInterval gi = point_mass_at_1();
    RtSeries rt = wallinga_teunis(series({2, 0, 4, 4}), gi);
    CHECK(rt.daily[0].has_value());
    CHECK_FALSE(rt.daily[1].has_value());
    // Day 2's cases have no admissible infector at lag 1 (day 1 had none),
    // so day 2 receives no attribution but still gets an estimate.
    CHECK(rt.daily[2].has_value());
    CHECK(*rt.daily[2] == doctest::Approx(1.0));
}

TEST_CASE("weekly average uses defined values only") {
    // 2020-02-03 is a Monday, so days 0..6 fill ISO week 2020-W06.
    RtSeries rt;
    rt.region_id = "R";
    rt.start = Date{2020, 2, 3};
    rt.daily = {1.2, 1.2, 1.2, 1.2, 1.2, 1.2, 1.2,
                1.0, std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt, 3.0};
    rt.censored.assign(14, false);
    WeeklyRt weekly = weekly_average(rt);
    REQUIRE(weekly.series.size() == 2);
    CHECK(weekly.series.weeks[0] == IsoWeek{2020, 6});
    CHECK(weekly.series.values[0] == doctest::Approx(1.2));
    CHECK(weekly.series.values[1] == doctest::Approx(2.0)); // mean of {1.0, 3.0}
}

TEST_CASE("weekly average matches a brute-force oracle on random input") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unif(0.0, 3.0);
    RtSeries rt;
    rt.region_id = "R";
    rt.start = Date{2020, 1, 29}; // Wednesday: partial first week
    for (int i = 0; i < 90; ++i) {
        if (rng() % 3 == 0) {
            rt.daily.push_back(std::nullopt);
        } else {
            rt.daily.push_back(unif(rng));
        }
        rt.censored.push_back(i >= 80);
    }
    WeeklyRt weekly = weekly_average(rt);

    std::map<IsoWeek, std::pair<double, int>> expect;
    std::map<IsoWeek, bool> censored;
    for (int i = 0; i < 90; ++i) {
        if (!rt.daily[size_t(i)]) continue;
        IsoWeek w = iso_week_of(rt.start.plus_days(i));
        expect[w].first += *rt.daily[size_t(i)];
        expect[w].second += 1;
        censored[w] = censored[w] || rt.censored[size_t(i)];
    }
    REQUIRE(weekly.series.size() == expect.size());
    for (size_t k = 0; k < weekly.series.size(); ++k) {
        const IsoWeek& w = weekly.series.weeks[k];
        CHECK(weekly.series.values[k] ==
              doctest::Approx(expect[w].first / expect[w].second));
        CHECK(weekly.censored[k] == censored[w]);
    }
}

TEST_CASE("onset_day counts days from 2020-01-01") {
    CHECK(onset_day(series({20}, Date{2020, 1, 1})).onset_day == 0);
    CHECK(onset_day(series({20}, Date{2020, 1, 1})).reached);

    // 5 cases/day from March 1st: cumulative hits 20 on March 4th.
    DailySeries s = series({5, 5, 5, 5, 5}, Date{2020, 3, 1});
    OnsetRecord rec = onset_day(s);
    CHECK(rec.reached);
    CHECK(rec.onset_day == 63);

    CHECK_FALSE(onset_day(series({0, 0, 0}, Date{2020, 3, 1})).reached);
    CHECK_THROWS_AS(onset_day(series({50}, Date{2019, 12, 31})), Error);
}

TEST_CASE("onset_day is monotone under earlier cases") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> v(40);
        for (double& x : v) x = double(rng() % 4);
        DailySeries base = series(v, Date{2020, 2, 1});
        OnsetRecord r1 = onset_day(base);

        // Add cases somewhere: onset can only move earlier (or appear).
        v[rng() % 40] += double(1 + rng() % 10);
        OnsetRecord r2 = onset_day(series(v, Date{2020, 2, 1}));
        if (r1.reached) {
            REQUIRE(r2.reached);
            CHECK(r2.onset_day <= r1.onset_day);
        }
    }
}

TEST_CASE("align_by_onset reindexes to the first recorded case") {
    std::map<std::string, RtSeries> rts;
    std::map<std::string, DailySeries> cases;

    // First case on 2020-02-10; series starts on 2020-02-08.
    cases["A"] = series({0, 0, 1, 2, 3, 4, 5, 6, 7, 8}, Date{2020, 2, 8});
    RtSeries rt;
    rt.region_id = "A";
    rt.start = Date{2020, 2, 8};
    for (int i = 0; i < 10; ++i) {
        rt.daily.push_back(double(i));
        rt.censored.push_back(false);
    }
    rts["A"] = rt;

    // A region with no cases at all is dropped.
    cases["B"] = series({0, 0, 0}, Date{2020, 2, 8});
    RtSeries rtb;
    rtb.region_id = "B";
    rtb.start = Date{2020, 2, 8};
    rtb.daily = {std::nullopt, std::nullopt, std::nullopt};
    rtb.censored = {false, false, false};
    rts["B"] = rtb;

    auto anchors = first_case_dates(cases);
    CHECK(anchors.count("A") == 1);
    CHECK(anchors.count("B") == 0);
    CHECK(anchors.at("A") == Date{2020, 2, 10});

    AlignedMatrix aligned = align_by_onset(rts, anchors, 28);
    REQUIRE(aligned.region_ids == std::vector<std::string>{"A"});
    REQUIRE(aligned.dropped == std::vector<std::string>{"B"});
    REQUIRE(aligned.rows[0].size() == 28); // window_days wide

    // Rt on 2020-02-15 (series index 7) lands at aligned index 5.
    CHECK(aligned.rows[0][5] == 7.0);
    CHECK(aligned.rows[0][0] == 2.0);
    CHECK_FALSE(aligned.rows[0][10].has_value()); // past the series end
}

TEST_CASE("series shorter than the gi support is rejected") {
    GenerationInterval gi = discretize_gamma(4.0, 2.0, 15);
    CHECK_THROWS_AS(wallinga_teunis(series({1, 2, 3}), gi), Error);
}
