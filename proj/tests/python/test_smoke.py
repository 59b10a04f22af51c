"""Smoke tests for the python bindings: one end-to-end touch per module."""

import math

import pytest

import epimob


def test_generation_interval():
    gi = epimob.discretize_gamma(4.0, 2.0, 21)
    assert math.isclose(sum(gi.pmf), 1.0, abs_tol=1e-9)
    assert gi.w(0) == 0.0
    assert abs(gi.discrete_mean() - 4.0) < 0.5
    with pytest.raises(epimob.EpimobError):
        epimob.discretize_gamma(10.0, 3.0, 8)


def test_calendar():
    w = epimob.iso_week_of(epimob.Date("2021-01-01"))
    assert (w.year, w.week) == (2020, 53)
    assert str(epimob.IsoWeek(2020, 9).start_date()) == "2020-02-24"


def test_rt_pipeline():
    gi = epimob.discretize_gamma(4.0, 2.0, 15)
    cases = epimob.DailySeries("X", epimob.Date("2020-02-03"), [30.0] * 80)
    rt = epimob.wallinga_teunis(cases, gi)
    interior = [v for v in rt.daily[20:60] if v is not None]
    assert all(abs(v - 1.0) < 0.05 for v in interior)

    weekly = epimob.weekly_average(rt)
    assert len(weekly.series) > 0

    onset = epimob.onset_day(cases, 20.0)
    assert onset.reached and onset.onset_day == 33


def test_mortality_round_trip():
    history = epimob.WeeklySeries("X")
    for year in range(2011, 2020):
        for week in range(1, epimob.weeks_in_iso_year(year) + 1):
            history.push(epimob.IsoWeek(year, week), 50.0)
    model = epimob.fit_baseline(history)
    assert not model.fallback
    assert abs(model.intercept - 50.0) < 1e-6

    weeks_2020 = [epimob.IsoWeek(2020, w) for w in range(1, 11)]
    pred = epimob.predict_baseline(model, weeks_2020)
    assert all(abs(e - 50.0) < 1e-6 for e in pred.expected)

    observed = epimob.WeeklySeries("X")
    for w in weeks_2020:
        observed.push(w, 50.0)
    ex = epimob.excess(observed, pred)
    assert all(abs(v) < 1e-9 for v in ex.excess)


def test_mobility_and_regression():
    registry = epimob.Registry()
    registry.add(epimob.Region("AA001", "AA", epimob.Typology.Urban, 1000.0, 10.0))
    registry.add(epimob.Region("AA002", "AA", epimob.Typology.Rural, 500.0, 50.0))

    week = epimob.IsoWeek(2020, 10)
    records = [
        epimob.OdmRecord(week, "AA001", "AA001", 100.0),
        epimob.OdmRecord(week, "AA001", "AA002", 40.0),
        epimob.OdmRecord(week, "AA002", "AA001", 10.0),
    ]
    table = epimob.weekly_aggregate(records, registry)
    internal = table.find("AA001", epimob.MobilityType.Internal, week)
    outbound = table.find("AA001", epimob.MobilityType.Outbound, week)
    inbound = table.find("AA002", epimob.MobilityType.Inbound, week)
    assert internal.raw == 100.0 and outbound.raw == 40.0 and inbound.raw == 40.0

    panel = epimob.Panel()
    rows = []
    for i in range(60):
        row = epimob.PanelRow()
        row.region_id = f"R{i % 6}"
        row.country = "AA" if i % 2 == 0 else "BB"
        row.week = epimob.IsoWeek(2020, 10 + i % 5)
        row.internal = (i % 7) / 7.0
        row.rt = 0.5 + 2.0 * row.internal
        rows.append(row)
    panel.rows = rows
    fit = epimob.ols_fit(panel, ["internal"])
    coef = fit.find("internal")
    assert abs(coef.estimate - 2.0) < 1e-9
    assert fit.r_squared == pytest.approx(1.0)


def test_simulator_determinism():
    cfg = epimob.ScenarioConfig()
    cfg.countries = 2
    cfg.regions_urban = cfg.regions_intermediate = cfg.regions_rural = 1
    cfg.weeks = 12
    a = epimob.simulate_panel(cfg)
    b = epimob.simulate_panel(cfg)
    assert len(a.regions) == 6
    ra = a.cases["AA001"].values
    rb = b.cases["AA001"].values
    assert ra == rb
