#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "epimob/error.hpp"
#include "epimob/mortality.hpp"

using namespace epimob;

namespace {

constexpr double kTau = 6.283185307179586;

template <typename F>
WeeklySeries make_history(int first_year, int last_year, F value) {
    WeeklySeries s;
    s.region_id = "R";
    for (int year = first_year; year <= last_year; ++year) {
        for (int week = 1; week <= weeks_in_iso_year(year); ++week) {
            IsoWeek w{year, week};
            s.push(w, value(w));
        }
    }
    return s;
}

double years_since(const IsoWeek& w, int anchor_year) {
    double anchor = double(IsoWeek{anchor_year, 1}.start_date().serial());
    return (double(w.start_date().serial()) - anchor) / 365.2425;
}

} // namespace

TEST_CASE("seasonal + trend generate-and-recover") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> noise(0.0, 3.0);
    auto gen = [&](const IsoWeek& w) {
        return 100.0 + 20.0 * std::cos(kTau * w.week / 52.0) + 1.0 * years_since(w, 2011);
    };
    WeeklySeries history = make_history(2011, 2019, [&](const IsoWeek& w) {
        return gen(w) + noise(rng);
    });

    BaselineModel model = fit_baseline(history);
    CHECK_FALSE(model.fallback);
    CHECK(model.trend_slope == doctest::Approx(1.0).epsilon(0.2));

    // Fitted seasonal amplitude: half the range of the seasonal component.
    double lo = 1e300, hi = -1e300;
    for (int u = 0; u < 52; ++u) {
        double v = model.seasonal_at(double(u));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double amplitude = (hi - lo) / 2.0;
    CHECK(amplitude == doctest::Approx(20.0).epsilon(0.10));
}

TEST_CASE("constant series fits exactly") {
    WeeklySeries history = make_history(2011, 2019, [](const IsoWeek&) { return 50.0; });
    BaselineModel model = fit_baseline(history);
    CHECK_FALSE(model.fallback);
    CHECK(model.intercept == doctest::Approx(50.0).epsilon(1e-9));
    CHECK(std::abs(model.trend_slope) < 1e-9);
    CHECK(model.dispersion < 1e-12);

    auto pred = predict_baseline(model, {IsoWeek{2020, 1}, IsoWeek{2020, 30}});
    for (double e : pred.expected) CHECK(e == doctest::Approx(50.0).epsilon(1e-9));
    // Bands collapse toward the expectation as dispersion -> 0.
    CHECK(pred.upper95[0] - pred.lower95[0] < 1e-6);
}

TEST_CASE("insufficient history is rejected") {
    WeeklySeries history = make_history(2018, 2019, [](const IsoWeek&) { return 50.0; });
    CHECK_THROWS_WITH_AS(fit_baseline(history), doctest::Contains("needs >="), Error);
}

TEST_CASE("negative deaths are rejected") {
    WeeklySeries history = make_history(2011, 2019, [](const IsoWeek&) { return 50.0; });
    history.values[40] = -1.0;
    CHECK_THROWS_AS(fit_baseline(history), Error);
}

TEST_CASE("singular seasonal design falls back to intercept+trend") {
    // 52 years of data but only weeks 1..3 observed: the spline basis is
    // rank deficient on three distinct week positions.
    WeeklySeries history;
    history.region_id = "R";
    for (int year = 1968; year <= 2019; ++year) {
        for (int week = 1; week <= 3; ++week) {
            history.push(IsoWeek{year, week}, 40.0 + 0.5 * (year - 1968));
        }
    }
    REQUIRE(history.size() >= 156);
    BaselineModel model = fit_baseline(history);
    CHECK(model.fallback);
    CHECK(model.trend_slope == doctest::Approx(0.5).epsilon(0.01));
    auto pred = predict_baseline(model, {IsoWeek{2020, 2}});
    CHECK(pred.expected[0] == doctest::Approx(40.0 + 0.5 * 52).epsilon(0.02));
}

TEST_CASE("sinusoidal model predicts winter above summer") {
    // Peak at week 1 (northern-winter mortality).
    WeeklySeries history = make_history(2011, 2019, [](const IsoWeek& w) {
        return 100.0 + 20.0 * std::cos(kTau * (w.week - 1) / 52.0);
    });
    BaselineModel model = fit_baseline(history);
    auto pred = predict_baseline(model, {IsoWeek{2020, 2}, IsoWeek{2020, 28}});
    CHECK(pred.expected[0] > pred.expected[1] + 25.0);
}

TEST_CASE("linear extrapolation: 2020 exceeds the 2011 mean by about 9") {
    WeeklySeries history = make_history(2011, 2019, [](const IsoWeek& w) {
        return 100.0 + 1.0 * years_since(w, 2011);
    });
    BaselineModel model = fit_baseline(history);

    double mean_2011 = 0.0;
    int n_2011 = 0;
    for (size_t i = 0; i < history.size(); ++i) {
        if (history.weeks[i].year == 2011) {
            mean_2011 += history.values[i];
            ++n_2011;
        }
    }
    mean_2011 /= n_2011;

    std::vector<IsoWeek> weeks_2020;
    for (int w = 1; w <= 53; ++w) weeks_2020.push_back(IsoWeek{2020, w});
    auto pred = predict_baseline(model, weeks_2020);
    double mean_2020 = 0.0;
    for (double e : pred.expected) mean_2020 += e;
    mean_2020 /= double(pred.expected.size());

    CHECK(mean_2020 - mean_2011 == doctest::Approx(9.0).epsilon(0.02));
}

TEST_CASE("no backcasting before the training span") {
    WeeklySeries history = make_history(2011, 2019, [](const IsoWeek&) { return 50.0; });
    BaselineModel model = fit_baseline(history);
    CHECK_THROWS_WITH_AS(predict_baseline(model, {IsoWeek{2010, 52}}),
                         doctest::Contains("no backcasting"), Error);
}

TEST_CASE("seasonal component is cyclic at the year wrap") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> noise(0.0, 2.0);
    WeeklySeries history = make_history(2011, 2019, [&](const IsoWeek& w) {
        return 80.0 + 10.0 * std::sin(kTau * w.week / 52.0) + noise(rng);
    });
    BaselineModel model = fit_baseline(history);
    CHECK(std::abs(model.seasonal_at(0.0) - model.seasonal_at(52.0)) < 1e-6);
    CHECK(std::abs(model.seasonal_at(0.25) - model.seasonal_at(52.25)) < 1e-6);
}

TEST_CASE("zero-noise identifiability on spline-representable data") {
    // Seasonal part drawn from the model's own basis plus a linear trend:
    // the fit must reproduce the generating values to 1e-6.
    const int K = 12;
    auto coeffs = std::vector<double>(size_t(K));
    for (int j = 0; j < K; ++j) coeffs[size_t(j)] = 100.0 + 15.0 * std::sin(kTau * j / K);

    auto gen = [&](const IsoWeek& w) {
        auto basis = seasonal_basis(week_position(w), K);
        double v = 2.0 * (double(w.start_date().serial()) / 365.2425);
        for (int j = 0; j < K; ++j) v += coeffs[size_t(j)] * basis[size_t(j)];
        return v;
    };
    WeeklySeries history = make_history(2011, 2019, gen);
    BaselineModel model = fit_baseline(history);
    CHECK_FALSE(model.fallback);
    CHECK(model.trend_slope == doctest::Approx(2.0).epsilon(1e-7));

    std::vector<IsoWeek> weeks;
    for (int w = 1; w <= 53; ++w) weeks.push_back(IsoWeek{2020, w});
    auto pred = predict_baseline(model, weeks);
    for (size_t i = 0; i < weeks.size(); ++i) {
        CHECK(pred.expected[i] == doctest::Approx(gen(weeks[i])).epsilon(1e-6));
    }
}

TEST_CASE("GCV smoothing choice is deterministic") {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> noise(0.0, 4.0);
    WeeklySeries history = make_history(2011, 2019, [&](const IsoWeek& w) {
        return 90.0 + 12.0 * std::cos(kTau * w.week / 52.0) + noise(rng);
    });
    BaselineModel a = fit_baseline(history);
    BaselineModel b = fit_baseline(history);
    CHECK(a.lambda == b.lambda);
    CHECK(a.edf == b.edf);
    CHECK(a.coeffs == b.coeffs);
}

namespace {

BaselinePrediction flat_prediction(const std::vector<IsoWeek>& weeks, double expected,
                                   double half_band) {
    BaselinePrediction p;
    p.region_id = "R";
    p.weeks = weeks;
    for (size_t i = 0; i < weeks.size(); ++i) {
        p.expected.push_back(expected);
        p.lower95.push_back(expected - half_band);
        p.upper95.push_back(expected + half_band);
    }
    return p;
}

} // namespace

TEST_CASE("excess is exactly zero inside the bands") {
    std::vector<IsoWeek> weeks;
    for (int w = 1; w <= 10; ++w) weeks.push_back(IsoWeek{2020, w});
    auto pred = flat_prediction(weeks, 100.0, 15.0);

    WeeklySeries observed;
    observed.region_id = "R";
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(86.0, 114.0);
    for (const auto& w : weeks) observed.push(w, unif(rng));

    ExcessSeries ex = excess(observed, pred);
    for (double v : ex.excess) CHECK(v == 0.0);
    for (double v : ex.excess_pct) CHECK(v == 0.0);
}

TEST_CASE("single exceedance is observed minus expected at that week only") {
    std::vector<IsoWeek> weeks;
    for (int w = 1; w <= 5; ++w) weeks.push_back(IsoWeek{2020, w});
    auto pred = flat_prediction(weeks, 100.0, 15.0);

    WeeklySeries observed;
    observed.region_id = "R";
    observed.push(weeks[0], 100.0);
    observed.push(weeks[1], 125.0); // upper95 + 10
    observed.push(weeks[2], 100.0);
    observed.push(weeks[3], 80.0); // negative excess (below lower95)
    observed.push(weeks[4], 100.0);

    ExcessSeries ex = excess(observed, pred);
    CHECK(ex.excess == std::vector<double>{0.0, 25.0, 0.0, -20.0, 0.0});
    CHECK(ex.excess_pct[1] == doctest::Approx(25.0));
    CHECK(ex.excess_pct[3] == doctest::Approx(-20.0));
    // Band geometry: lower95 <= expected <= upper95 echoed through.
    for (size_t i = 0; i < ex.weeks.size(); ++i) {
        CHECK(ex.lower95[i] <= ex.expected[i]);
        CHECK(ex.expected[i] <= ex.upper95[i]);
    }
}

TEST_CASE("misaligned weeks raise an error naming them") {
    std::vector<IsoWeek> weeks{IsoWeek{2020, 1}, IsoWeek{2020, 2}};
    auto pred = flat_prediction(weeks, 100.0, 15.0);
    WeeklySeries observed;
    observed.region_id = "R";
    observed.push(IsoWeek{2020, 2}, 100.0);
    observed.push(IsoWeek{2020, 7}, 100.0);
    CHECK_THROWS_WITH_AS(excess(observed, pred), doctest::Contains("2020-W07"), Error);
}

TEST_CASE("+40% injected excess over 6 weeks is recovered within 10%") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> noise(0.0, 3.0); // 3% of the level
    auto gen = [&](const IsoWeek& w) {
        return 100.0 + 15.0 * std::cos(kTau * (w.week - 2) / 52.0) +
               0.5 * years_since(w, 2011);
    };
    WeeklySeries history = make_history(2011, 2019, [&](const IsoWeek& w) {
        return gen(w) + noise(rng);
    });
    BaselineModel model = fit_baseline(history);

    WeeklySeries observed;
    observed.region_id = "R";
    double injected_total = 0.0;
    for (int wk = 1; wk <= 53; ++wk) {
        IsoWeek w{2020, wk};
        double base = gen(w) + noise(rng);
        if (wk >= 14 && wk <= 19) {
            observed.push(w, base * 1.4);
            injected_total += gen(w) * 0.4;
        } else {
            observed.push(w, base);
        }
    }

    auto pred = predict_baseline(model, observed.weeks);
    ExcessSeries ex = excess(observed, pred);
    double recovered = 0.0;
    for (double v : ex.excess) recovered += v;
    CHECK(recovered == doctest::Approx(injected_total).epsilon(0.10));

    // Exceedance covers the injected window.
    for (int wk = 14; wk <= 19; ++wk) {
        CHECK(ex.excess[size_t(wk - 1)] > 0.0);
    }
}

namespace {

ExcessSeries pct_series(const std::string& id, const IsoWeek& week, double excess_val,
                        double pct) {
    ExcessSeries s;
    s.region_id = id;
    s.weeks = {week};
    s.observed = {0.0};
    s.expected = {0.0};
    s.lower95 = {0.0};
    s.upper95 = {0.0};
    s.excess = {excess_val};
    s.excess_pct = {pct};
    return s;
}

} // namespace

TEST_CASE("aggregate_excess sums totals and takes typology medians") {
    Registry reg;
    reg.add({"U1", "AA", Typology::Urban, 1000, 10, 0});
    reg.add({"U2", "AA", Typology::Urban, 1000, 10, 0});
    reg.add({"I1", "AA", Typology::Intermediate, 1000, 10, 0});
    reg.add({"R1", "AA", Typology::Rural, 1000, 10, 0});

    IsoWeek w{2020, 15};
    std::vector<ExcessSeries> series{
        pct_series("U1", w, 10.0, 73.0),
        pct_series("U2", w, 30.0, 73.0),
        pct_series("I1", w, 5.0, 15.0),
        pct_series("R1", w, 1.0, 5.0),
    };
    AggregateExcess agg = aggregate_excess(series, reg);
    REQUIRE(agg.weeks.size() == 1);
    CHECK(agg.total_excess[0] == doctest::Approx(46.0));
    CHECK(*agg.median_excess_pct[Typology::Urban][0] == doctest::Approx(73.0));
    CHECK(*agg.median_excess_pct[Typology::Intermediate][0] == doctest::Approx(15.0));
    CHECK(*agg.median_excess_pct[Typology::Rural][0] == doctest::Approx(5.0));

    // First-wave gaps: 58 pp over intermediate, 68 pp over rural.
    double urban = *agg.median_excess_pct[Typology::Urban][0];
    CHECK(urban - *agg.median_excess_pct[Typology::Intermediate][0] == doctest::Approx(58.0));
    CHECK(urban - *agg.median_excess_pct[Typology::Rural][0] == doctest::Approx(68.0));
}

TEST_CASE("two regions with excess 10 and 30 total 40") {
    Registry reg;
    reg.add({"A", "AA", Typology::Urban, 1000, 10, 0});
    reg.add({"B", "AA", Typology::Rural, 1000, 10, 0});
    IsoWeek w{2020, 20};
    AggregateExcess agg = aggregate_excess(
        {pct_series("A", w, 10.0, 12.0), pct_series("B", w, 30.0, 40.0)}, reg);
    CHECK(agg.total_excess[0] == doctest::Approx(40.0));
}

TEST_CASE("second-wave ordering: rural above intermediate above urban") {
    Registry reg;
    reg.add({"U1", "AA", Typology::Urban, 1000, 10, 0});
    reg.add({"I1", "AA", Typology::Intermediate, 1000, 10, 0});
    reg.add({"R1", "AA", Typology::Rural, 1000, 10, 0});
    IsoWeek w{2020, 46};
    std::vector<ExcessSeries> series{
        pct_series("U1", w, 26.0, 26.0),
        pct_series("I1", w, 32.0, 32.0),
        pct_series("R1", w, 38.0, 38.0),
    };
    AggregateExcess agg = aggregate_excess(series, reg);
    double urban = *agg.median_excess_pct[Typology::Urban][0];
    double intermediate = *agg.median_excess_pct[Typology::Intermediate][0];
    double rural = *agg.median_excess_pct[Typology::Rural][0];
    CHECK(rural > intermediate);
    CHECK(intermediate > urban);
    CHECK(rural == doctest::Approx(38.0));
    CHECK(intermediate == doctest::Approx(32.0));
    CHECK(urban == doctest::Approx(26.0));
}
