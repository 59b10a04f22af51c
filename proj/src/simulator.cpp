#include "epimob/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "epimob/csv.hpp"
#include "epimob/error.hpp"
#include "epimob/kv.hpp"
#include "epimob/load.hpp"

namespace epimob {

namespace {

constexpr double kTau = 6.283185307179586;

// splitmix64: cheap, well-mixed sub-stream seeds from (master, index).
uint64_t mix_seed(uint64_t seed, uint64_t stream) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

enum Stream : uint64_t { kMobility = 0, kRtNoise = 1, kCases = 2, kDeaths = 3 };

double typology_value(Typology t, double urban, double intermediate, double rural) {
    switch (t) {
        case Typology::Urban: return urban;
        case Typology::Intermediate: return intermediate;
        case Typology::Rural: return rural;
    }
    return urban;
}

} // namespace

void ScenarioConfig::validate() const {
    if (countries < 1) throw input_error("scenario: countries must be >= 1");
    if (countries > 26 * 26) throw input_error("scenario: too many countries");
    if (regions_urban < 0 || regions_intermediate < 0 || regions_rural < 0 ||
        regions_urban + regions_intermediate + regions_rural == 0) {
        throw input_error("scenario: at least one region per country required");
    }
    if (weeks < 4) throw input_error("scenario: weeks must be >= 4");
    if (start_date.iso_weekday() != 1) {
        throw input_error("scenario: start_date must be a Monday (got " +
                          start_date.to_string() + ")");
    }
    if (seed_cases <= 0) throw input_error("scenario: epidemic.seed_cases must be positive");
    if (import_rate < 0) throw input_error("scenario: epidemic.import_rate must be >= 0");
    if (fanout < 1) throw input_error("scenario: mobility.fanout must be >= 1");
    if (cross_frac < 0) throw input_error("scenario: mobility.cross_frac must be >= 0");
    if (history_end_year < history_start_year + 2) {
        throw input_error("scenario: mortality history must span >= 3 years");
    }
    int target_year = start_date.year;
    for (const auto& w : excess_windows) {
        if (w.end < w.start) {
            throw input_error("scenario: excess window end " + w.end.to_string() +
                              " precedes start " + w.start.to_string());
        }
        if (w.start.year != target_year || w.end.year != target_year) {
            throw input_error("scenario: excess window " + w.start.to_string() + ":" +
                              w.end.to_string() + " lies outside the target year " +
                              std::to_string(target_year));
        }
    }
}

ScenarioConfig ScenarioConfig::from_kv(KeyValues& kv) {
    ScenarioConfig cfg;
    std::string s;

    cfg.seed = uint64_t(kv.take_number("seed", double(cfg.seed)));
    cfg.countries = kv.take_int("countries", cfg.countries);
    cfg.regions_urban = kv.take_int("regions.urban", cfg.regions_urban);
    cfg.regions_intermediate = kv.take_int("regions.intermediate", cfg.regions_intermediate);
    cfg.regions_rural = kv.take_int("regions.rural", cfg.regions_rural);
    if (kv.take("start_date", s)) cfg.start_date = parse_date(s);
    cfg.weeks = kv.take_int("weeks", cfg.weeks);
    cfg.seed_cases = kv.take_number("epidemic.seed_cases", cfg.seed_cases);
    cfg.import_rate = kv.take_number("epidemic.import_rate", cfg.import_rate);
    cfg.gi_mean_days = kv.take_number("gi.mean_days", cfg.gi_mean_days);
    cfg.gi_sd_days = kv.take_number("gi.sd_days", cfg.gi_sd_days);
    cfg.gi_max_lag = kv.take_int("gi.max_lag", cfg.gi_max_lag);
    cfg.gi_mean_days = kv.take_number("generation_interval.mean_days", cfg.gi_mean_days);
    cfg.gi_sd_days = kv.take_number("generation_interval.sd_days", cfg.gi_sd_days);
    cfg.gi_max_lag = kv.take_int("generation_interval.max_lag", cfg.gi_max_lag);
    cfg.alpha = kv.take_number("coupling.alpha", cfg.alpha);
    cfg.alpha_spread = kv.take_number("coupling.alpha_spread", cfg.alpha_spread);
    cfg.beta = kv.take_number("coupling.beta", cfg.beta);
    cfg.coupling_lag_weeks = kv.take_int("coupling.lag_weeks", cfg.coupling_lag_weeks);
    cfg.rt_noise_sd = kv.take_number("coupling.noise_sd", cfg.rt_noise_sd);
    cfg.mobility_pc_urban = kv.take_number("mobility.per_capita.urban", cfg.mobility_pc_urban);
    cfg.mobility_pc_intermediate =
        kv.take_number("mobility.per_capita.intermediate", cfg.mobility_pc_intermediate);
    cfg.mobility_pc_rural = kv.take_number("mobility.per_capita.rural", cfg.mobility_pc_rural);
    cfg.mobility_noise_sd = kv.take_number("mobility.noise_sd", cfg.mobility_noise_sd);
    cfg.cross_frac = kv.take_number("mobility.cross_frac", cfg.cross_frac);
    cfg.fanout = kv.take_int("mobility.fanout", cfg.fanout);
    cfg.lockdown_start_week = kv.take_int("mobility.lockdown_start_week", cfg.lockdown_start_week);
    cfg.lockdown_end_week = kv.take_int("mobility.lockdown_end_week", cfg.lockdown_end_week);
    cfg.lockdown_level = kv.take_number("mobility.lockdown_level", cfg.lockdown_level);
    cfg.summer_peak_week = kv.take_int("mobility.summer_peak_week", cfg.summer_peak_week);
    cfg.summer_level = kv.take_number("mobility.summer_level", cfg.summer_level);
    cfg.autumn_week = kv.take_int("mobility.autumn_week", cfg.autumn_week);
    cfg.autumn_level = kv.take_number("mobility.autumn_level", cfg.autumn_level);
    cfg.population_urban = kv.take_number("population.urban", cfg.population_urban);
    cfg.population_intermediate =
        kv.take_number("population.intermediate", cfg.population_intermediate);
    cfg.population_rural = kv.take_number("population.rural", cfg.population_rural);
    cfg.population_jitter = kv.take_number("population.jitter", cfg.population_jitter);
    cfg.area_urban = kv.take_number("area.urban", cfg.area_urban);
    cfg.area_intermediate = kv.take_number("area.intermediate", cfg.area_intermediate);
    cfg.area_rural = kv.take_number("area.rural", cfg.area_rural);
    cfg.mortality_weekly_rate = kv.take_number("mortality.weekly_rate", cfg.mortality_weekly_rate);
    cfg.mortality_seasonal_amplitude =
        kv.take_number("mortality.seasonal_amplitude", cfg.mortality_seasonal_amplitude);
    cfg.mortality_peak_week = kv.take_int("mortality.peak_week", cfg.mortality_peak_week);
    cfg.mortality_trend = kv.take_number("mortality.trend", cfg.mortality_trend);
    cfg.mortality_noise = kv.take_number("mortality.noise", cfg.mortality_noise);
    cfg.history_start_year = kv.take_int("mortality.history_start", cfg.history_start_year);
    cfg.history_end_year = kv.take_int("mortality.history_end", cfg.history_end_year);

    bool excess_enabled = kv.take_bool("excess.enabled", true);
    auto window = [&](size_t idx, const std::string& prefix) {
        ExcessWindow& w = cfg.excess_windows[idx];
        if (kv.take(prefix + ".start", s)) w.start = parse_iso_week(s);
        if (kv.take(prefix + ".end", s)) w.end = parse_iso_week(s);
        w.urban = kv.take_number(prefix + ".urban", w.urban);
        w.intermediate = kv.take_number(prefix + ".intermediate", w.intermediate);
        w.rural = kv.take_number(prefix + ".rural", w.rural);
    };
    window(0, "excess.first");
    window(1, "excess.second");
    if (!excess_enabled) cfg.excess_windows.clear();

    cfg.validate();
    return cfg;
}

ScenarioConfig ScenarioConfig::parse(const std::filesystem::path& path) {
    KeyValues kv = KeyValues::from_file(path);
    ScenarioConfig cfg = from_kv(kv);
    kv.finish();
    return cfg;
}

DailySeries simulate_cases(const std::vector<double>& daily_r, const GenerationInterval& gi,
                           double seed_cases, double import_rate, uint64_t seed,
                           const Date& start, const std::string& region_id) {
    if (seed_cases <= 0) {
        throw input_error("simulate_cases: seed_cases must be positive");
    }
    const int n = int(daily_r.size());
    if (n <= gi.max_lag()) {
        throw input_error("simulate_cases: trajectory must be longer than the "
                          "generation-interval support");
    }

    std::mt19937_64 rng(seed);
    DailySeries out;
    out.region_id = region_id;
    out.start = start;
    out.values.assign(size_t(n), 0.0);
    out.values[0] = seed_cases;

    for (int t = 1; t < n; ++t) {
        double pressure = 0.0;
        for (int k = 1; k <= gi.max_lag() && k <= t; ++k) {
            pressure += out.values[size_t(t - k)] * gi.w(k);
        }
        double lambda = daily_r[size_t(t)] * pressure + import_rate;
        if (lambda > 1e9) {
            throw computation_error(
                "simulate_cases: expected daily cases exceed 1e9 in region '" + region_id +
                "'; lower R or shorten the horizon");
        }
        if (lambda > 0) {
            std::poisson_distribution<long> pois(lambda);
            out.values[size_t(t)] = double(pois(rng));
        }
    }
    return out;
}

double mortality_expectation(const MortalityParams& params, const IsoWeek& week) {
    double u = double(std::min(week.week, 52) - 1);
    double seasonal = params.seasonal_amplitude *
                      std::cos(kTau * (u - double(params.peak_week - 1)) / 52.0);
    double anchor = double(IsoWeek{params.history_start_year, 1}.start_date().serial());
    double years = (double(week.start_date().serial()) - anchor) / 365.2425;
    return params.level * (1.0 + seasonal + params.trend * years);
}

WeeklySeries simulate_mortality(const MortalityParams& params,
                                const std::vector<std::pair<IsoWeek, IsoWeek>>& windows,
                                double excess_frac, uint64_t seed,
                                const std::string& region_id) {
    if (params.level <= 0) {
        throw input_error("simulate_mortality: level must be positive");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    WeeklySeries out;
    out.region_id = region_id;
    for (int year = params.history_start_year; year <= params.target_year; ++year) {
        if (year > params.history_end_year && year < params.target_year) continue;
        int n_weeks = weeks_in_iso_year(year);
        for (int wk = 1; wk <= n_weeks; ++wk) {
            IsoWeek week{year, wk};
            double mean = mortality_expectation(params, week);
            if (year == params.target_year) {
                for (const auto& [ws, we] : windows) {
                    if (!(week < ws) && !(we < week)) {
                        mean *= 1.0 + excess_frac;
                        break;
                    }
                }
            }
            double noise = params.noise > 0 ? params.noise * params.level * gauss(rng) : 0.0;
            out.push(week, std::max(0.0, mean + noise));
        }
    }
    return out;
}

namespace {

std::string country_code(int i) {
    std::string code = "AA";
    code[0] = char('A' + i / 26);
    code[1] = char('A' + i % 26);
    return code;
}

double shape_at(const ScenarioConfig& cfg, int week_index) {
    // Piecewise-linear control points over sim week indices.
    struct Pt { double w, v; };
    std::vector<Pt> pts = {
        {0.0, 1.0},
        {double(cfg.lockdown_start_week), 1.0},
        {double(cfg.lockdown_end_week), cfg.lockdown_level},
        {double(cfg.summer_peak_week), cfg.summer_level},
        {double(cfg.autumn_week), cfg.autumn_level},
        {double(cfg.weeks - 1), cfg.autumn_level},
    };
    std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) { return a.w < b.w; });
    double x = std::clamp(double(week_index), pts.front().w, pts.back().w);
    for (size_t i = 1; i < pts.size(); ++i) {
        if (x <= pts[i].w) {
            double span = pts[i].w - pts[i - 1].w;
            if (span <= 0) return pts[i].v;
            double f = (x - pts[i - 1].w) / span;
            return pts[i - 1].v + f * (pts[i].v - pts[i - 1].v);
        }
    }
    return pts.back().v;
}

} // namespace

SimDataset simulate_panel(const ScenarioConfig& cfg) {
    cfg.validate();
    SimDataset ds;
    GenerationInterval gi = discretize_gamma(cfg.gi_mean_days, cfg.gi_sd_days, cfg.gi_max_lag);

    // Regions.
    const int per_country = cfg.regions_urban + cfg.regions_intermediate + cfg.regions_rural;
    for (int c = 0; c < cfg.countries; ++c) {
        std::mt19937_64 rng(mix_seed(cfg.seed, uint64_t(c) * 131 + 7));
        std::uniform_real_distribution<double> jitter(-cfg.population_jitter,
                                                      cfg.population_jitter);
        for (int i = 0; i < per_country; ++i) {
            Typology t = i < cfg.regions_urban ? Typology::Urban
                         : i < cfg.regions_urban + cfg.regions_intermediate
                             ? Typology::Intermediate
                             : Typology::Rural;
            Region r;
            char buf[8];
            std::snprintf(buf, sizeof(buf), "%03d", i + 1);
            r.region_id = country_code(c) + buf;
            r.country = country_code(c);
            r.typology = t;
            double base = typology_value(t, cfg.population_urban,
                                         cfg.population_intermediate, cfg.population_rural);
            r.population = std::round(base * (1.0 + jitter(rng)));
            r.area_km2 = typology_value(t, cfg.area_urban, cfg.area_intermediate,
                                        cfg.area_rural);
            ds.regions.add(std::move(r));
        }
    }

    std::vector<IsoWeek> sim_weeks;
    for (int w = 0; w < cfg.weeks; ++w) sim_weeks.push_back(cfg.first_week().plus_weeks(w));

    // Mobility: internal counts plus cross flows to same-country neighbours.
    std::map<std::tuple<std::string, int, IsoWeek>, double> agg;
    const auto& regions = ds.regions.regions();
    for (size_t ridx = 0; ridx < regions.size(); ++ridx) {
        const Region& r = regions[ridx];
        std::mt19937_64 rng(mix_seed(cfg.seed, ridx * 8 + kMobility));
        std::normal_distribution<double> gauss(0.0, 1.0);
        double pc = typology_value(r.typology, cfg.mobility_pc_urban,
                                   cfg.mobility_pc_intermediate, cfg.mobility_pc_rural);

        size_t country_begin = (ridx / size_t(per_country)) * size_t(per_country);
        for (int w = 0; w < cfg.weeks; ++w) {
            double internal = r.population * pc * shape_at(cfg, w) *
                              std::exp(cfg.mobility_noise_sd * gauss(rng));
            double out_total = cfg.cross_frac * internal *
                               std::exp(cfg.mobility_noise_sd * gauss(rng));
            OdmRecord rec;
            rec.weekly = true;
            rec.week = sim_weeks[size_t(w)];
            rec.origin = r.region_id;
            rec.destination = r.region_id;
            rec.count = internal;
            ds.odm.push_back(rec);
            agg[{r.region_id, int(MobilityType::Internal), rec.week}] += internal;

            if (per_country > 1 && out_total > 0) {
                int n_dest = std::min(cfg.fanout, per_country - 1);
                double pop_sum = 0.0;
                for (int d = 1; d <= n_dest; ++d) {
                    pop_sum += regions[country_begin + (ridx - country_begin + size_t(d)) %
                                                           size_t(per_country)].population;
                }
                for (int d = 1; d <= n_dest; ++d) {
                    const Region& dest = regions[country_begin +
                                                 (ridx - country_begin + size_t(d)) %
                                                     size_t(per_country)];
                    double flow = out_total * dest.population / pop_sum;
                    OdmRecord cross;
                    cross.weekly = true;
                    cross.week = rec.week;
                    cross.origin = r.region_id;
                    cross.destination = dest.region_id;
                    cross.count = flow;
                    ds.odm.push_back(cross);
                    agg[{r.region_id, int(MobilityType::Outbound), cross.week}] += flow;
                    agg[{dest.region_id, int(MobilityType::Inbound), cross.week}] += flow;
                }
            }
        }
    }
    for (const auto& [key, total] : agg) {
        MobilityTable::Row row;
        row.region_id = std::get<0>(key);
        row.type = MobilityType(std::get<1>(key));
        row.week = std::get<2>(key);
        row.raw = total;
        ds.mobility.rows.push_back(std::move(row));
    }
    minmax_normalize(ds.mobility, ds.regions, sim_weeks.front(), sim_weeks.back());
    per_capita(ds.mobility, ds.regions, sim_weeks.front(), sim_weeks.back());

    // Ground-truth Rt coupled to normalized internal mobility.
    ds.truth.beta = cfg.beta;
    ds.truth.coupling_lag_weeks = cfg.coupling_lag_weeks;
    for (size_t ridx = 0; ridx < regions.size(); ++ridx) {
        const Region& r = regions[ridx];
        std::mt19937_64 rng(mix_seed(cfg.seed, ridx * 8 + kRtNoise));
        std::normal_distribution<double> gauss(0.0, 1.0);
        int c = int(ridx) / per_country;
        double alpha_c = cfg.alpha + (cfg.countries > 1
                                          ? cfg.alpha_spread * double(c) / (cfg.countries - 1)
                                          : 0.0);
        WeeklySeries rt;
        rt.region_id = r.region_id;
        for (int w = 0; w < cfg.weeks; ++w) {
            int src = std::clamp(w + cfg.coupling_lag_weeks, 0, cfg.weeks - 1);
            const auto* m = ds.mobility.find(r.region_id, MobilityType::Internal,
                                             sim_weeks[size_t(src)]);
            double norm = m && m->has_normalized ? m->normalized : 0.0;
            double value = alpha_c + cfg.beta * norm + cfg.rt_noise_sd * gauss(rng);
            rt.push(sim_weeks[size_t(w)], std::max(0.0, value));
        }
        ds.truth.rt.emplace(r.region_id, std::move(rt));
    }

    // Cases from the renewal process; the daily R is the week's truth value.
    for (size_t ridx = 0; ridx < regions.size(); ++ridx) {
        const Region& r = regions[ridx];
        const WeeklySeries& rt = ds.truth.rt.at(r.region_id);
        std::vector<double> daily(size_t(cfg.n_days()));
        for (int d = 0; d < cfg.n_days(); ++d) {
            daily[size_t(d)] = rt.values[size_t(d / 7)];
        }
        ds.cases.emplace(r.region_id,
                         simulate_cases(daily, gi, cfg.seed_cases, cfg.import_rate,
                                        mix_seed(cfg.seed, ridx * 8 + kCases),
                                        cfg.start_date, r.region_id));
    }

    // Weekly deaths: seasonal+trend history plus target-year excess windows.
    std::vector<std::pair<IsoWeek, IsoWeek>> windows;
    for (const auto& w : cfg.excess_windows) windows.emplace_back(w.start, w.end);
    for (size_t ridx = 0; ridx < regions.size(); ++ridx) {
        const Region& r = regions[ridx];
        MortalityParams mp;
        mp.level = r.population * cfg.mortality_weekly_rate;
        mp.seasonal_amplitude = cfg.mortality_seasonal_amplitude;
        mp.peak_week = cfg.mortality_peak_week;
        mp.trend = cfg.mortality_trend;
        mp.noise = cfg.mortality_noise;
        mp.history_start_year = cfg.history_start_year;
        mp.history_end_year = cfg.history_end_year;
        mp.target_year = cfg.start_date.year;

        // Same multiplicative bump for every window of this region's typology.
        WeeklySeries deaths;
        deaths.region_id = r.region_id;
        std::mt19937_64 rng(mix_seed(cfg.seed, ridx * 8 + kDeaths));
        std::normal_distribution<double> gauss(0.0, 1.0);
        WeeklySeries excess_pct;
        excess_pct.region_id = r.region_id;
        for (int year = mp.history_start_year; year <= mp.target_year; ++year) {
            if (year > mp.history_end_year && year < mp.target_year) continue;
            for (int wk = 1; wk <= weeks_in_iso_year(year); ++wk) {
                IsoWeek week{year, wk};
                double mean = mortality_expectation(mp, week);
                double injected = 0.0;
                if (year == mp.target_year) {
                    for (const auto& w : cfg.excess_windows) {
                        if (!(week < w.start) && !(w.end < week)) {
                            injected = typology_value(r.typology, w.urban, w.intermediate,
                                                      w.rural);
                            break;
                        }
                    }
                }
                mean *= 1.0 + injected;
                double noise = mp.noise > 0 ? mp.noise * mp.level * gauss(rng) : 0.0;
                deaths.push(week, std::max(0.0, mean + noise));
                if (year == mp.target_year) {
                    excess_pct.push(week, 100.0 * injected);
                }
            }
        }
        ds.deaths.emplace(r.region_id, std::move(deaths));
        ds.truth.excess_pct.emplace(r.region_id, std::move(excess_pct));
    }

    return ds;
}

void write_default_config(const std::filesystem::path& path) {
    ScenarioConfig d;
    std::ofstream out(path);
    if (!out) throw input_error("cannot open '" + path.string() + "' for writing");
    out << "# Synthetic-panel scenario. Every key is optional; the values below are\n"
           "# the defaults.\n\n";
    out << "seed = " << d.seed << "\n";
    out << "countries = " << d.countries << "\n";
    out << "regions.urban = " << d.regions_urban << "          # regions per country\n";
    out << "regions.intermediate = " << d.regions_intermediate << "\n";
    out << "regions.rural = " << d.regions_rural << "\n";
    out << "start_date = " << d.start_date.to_string() << "   # must be a Monday\n";
    out << "weeks = " << d.weeks << "\n\n";
    out << "epidemic.seed_cases = " << fmt_num(d.seed_cases) << "    # cases on day 0\n";
    out << "epidemic.import_rate = " << fmt_num(d.import_rate)
        << "  # mean imported cases per day\n\n";
    out << "# Generation interval (days); change deliberately, there is no\n"
           "# scientifically neutral default.\n";
    out << "gi.mean_days = " << fmt_num(d.gi_mean_days) << "\n";
    out << "gi.sd_days = " << fmt_num(d.gi_sd_days) << "\n";
    out << "gi.max_lag = " << d.gi_max_lag << "\n\n";
    out << "# Rt(region, week) = alpha(country) + beta * normalized internal\n"
           "# mobility(region, week + lag) + noise, clipped at zero.\n";
    out << "coupling.alpha = " << fmt_num(d.alpha) << "\n";
    out << "coupling.alpha_spread = " << fmt_num(d.alpha_spread) << "\n";
    out << "coupling.beta = " << fmt_num(d.beta) << "\n";
    out << "coupling.lag_weeks = " << d.coupling_lag_weeks << "\n";
    out << "coupling.noise_sd = " << fmt_num(d.rt_noise_sd) << "\n\n";
    out << "# Weekly movements per person by typology, with a piecewise-linear\n"
           "# time shape (week indices into the simulated span).\n";
    out << "mobility.per_capita.urban = " << fmt_num(d.mobility_pc_urban) << "\n";
    out << "mobility.per_capita.intermediate = " << fmt_num(d.mobility_pc_intermediate) << "\n";
    out << "mobility.per_capita.rural = " << fmt_num(d.mobility_pc_rural) << "\n";
    out << "mobility.noise_sd = " << fmt_num(d.mobility_noise_sd) << "\n";
    out << "mobility.cross_frac = " << fmt_num(d.cross_frac)
        << "   # outbound flow as a share of internal\n";
    out << "mobility.fanout = " << d.fanout << "         # destinations per region-week\n";
    out << "mobility.lockdown_start_week = " << d.lockdown_start_week << "\n";
    out << "mobility.lockdown_end_week = " << d.lockdown_end_week << "\n";
    out << "mobility.lockdown_level = " << fmt_num(d.lockdown_level) << "\n";
    out << "mobility.summer_peak_week = " << d.summer_peak_week << "\n";
    out << "mobility.summer_level = " << fmt_num(d.summer_level) << "\n";
    out << "mobility.autumn_week = " << d.autumn_week << "\n";
    out << "mobility.autumn_level = " << fmt_num(d.autumn_level) << "\n\n";
    out << "population.urban = " << fmt_num(d.population_urban) << "\n";
    out << "population.intermediate = " << fmt_num(d.population_intermediate) << "\n";
    out << "population.rural = " << fmt_num(d.population_rural) << "\n";
    out << "population.jitter = " << fmt_num(d.population_jitter)
        << "   # relative uniform jitter\n";
    out << "area.urban = " << fmt_num(d.area_urban) << "          # km2\n";
    out << "area.intermediate = " << fmt_num(d.area_intermediate) << "\n";
    out << "area.rural = " << fmt_num(d.area_rural) << "\n\n";
    out << "mortality.weekly_rate = " << fmt_num(d.mortality_weekly_rate)
        << "  # weekly deaths per person\n";
    out << "mortality.seasonal_amplitude = " << fmt_num(d.mortality_seasonal_amplitude)
        << "  # fraction of the level\n";
    out << "mortality.peak_week = " << d.mortality_peak_week
        << "     # week-of-year of the winter peak\n";
    out << "mortality.trend = " << fmt_num(d.mortality_trend)
        << "  # fractional increase per year\n";
    out << "mortality.noise = " << fmt_num(d.mortality_noise)
        << "   # sd as a fraction of the level\n";
    out << "mortality.history_start = " << d.history_start_year << "\n";
    out << "mortality.history_end = " << d.history_end_year << "\n\n";
    out << "# Injected mortality excess (fractional, per typology), target year only.\n";
    out << "excess.enabled = true\n";
    out << "excess.first.start = " << d.excess_windows[0].start.to_string() << "\n";
    out << "excess.first.end = " << d.excess_windows[0].end.to_string() << "\n";
    out << "excess.first.urban = " << fmt_num(d.excess_windows[0].urban) << "\n";
    out << "excess.first.intermediate = " << fmt_num(d.excess_windows[0].intermediate) << "\n";
    out << "excess.first.rural = " << fmt_num(d.excess_windows[0].rural) << "\n";
    out << "excess.second.start = " << d.excess_windows[1].start.to_string() << "\n";
    out << "excess.second.end = " << d.excess_windows[1].end.to_string() << "\n";
    out << "excess.second.urban = " << fmt_num(d.excess_windows[1].urban) << "\n";
    out << "excess.second.intermediate = " << fmt_num(d.excess_windows[1].intermediate) << "\n";
    out << "excess.second.rural = " << fmt_num(d.excess_windows[1].rural) << "\n";
}

void write_dataset(const SimDataset& ds, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_regions(dir / "regions.csv", ds.regions);
    write_daily_cases(dir / "cases.csv", ds.cases);
    write_weekly_deaths(dir / "deaths.csv", ds.deaths);

    CsvWriter odm(dir / "odm.csv", {"period", "origin", "destination", "count"});
    for (const auto& rec : ds.odm) {
        odm.row({rec.weekly ? rec.week.to_string() : rec.day.to_string(), rec.origin,
                 rec.destination, fmt_num(rec.count)});
    }

    CsvWriter rt(dir / "truth_rt.csv", {"region_id", "iso_year", "iso_week", "rt"});
    for (const auto& [id, s] : ds.truth.rt) {
        for (size_t i = 0; i < s.size(); ++i) {
            rt.row({id, std::to_string(s.weeks[i].year), std::to_string(s.weeks[i].week),
                    fmt_num(s.values[i])});
        }
    }

    CsvWriter ex(dir / "truth_excess.csv",
                 {"region_id", "iso_year", "iso_week", "injected_pct"});
    for (const auto& [id, s] : ds.truth.excess_pct) {
        for (size_t i = 0; i < s.size(); ++i) {
            ex.row({id, std::to_string(s.weeks[i].year), std::to_string(s.weeks[i].week),
                    fmt_num(s.values[i])});
        }
    }
}

} // namespace epimob
