#include "epimob/regression.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "epimob/error.hpp"

namespace epimob {

namespace {

double panel_field(const PanelRow& row, const std::string& name) {
    if (name == "intermediate") return row.intermediate;
    if (name == "rural") return row.rural;
    if (name == "internal") return row.internal;
    if (name == "inbound") return row.inbound;
    if (name == "outbound") return row.outbound;
    if (name == "internal_pca") return row.internal_pca;
    if (name == "population") return row.population;
    if (name == "density") return row.density;
    throw input_error("unknown regressor '" + name + "'");
}

void transform_in_place(std::vector<PanelRow>& rows, PopTransform t) {
    if (t == PopTransform::Raw) return;
    if (t == PopTransform::Log) {
        for (auto& r : rows) {
            r.population = std::log(r.population);
            r.density = std::log(r.density);
        }
        return;
    }
    // Min-max over the panel's rows, degenerate span -> 0.
    auto minmax = [&](auto get, auto set) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& r : rows) {
            lo = std::min(lo, get(r));
            hi = std::max(hi, get(r));
        }
        for (auto& r : rows) {
            set(r, hi > lo ? (get(r) - lo) / (hi - lo) : 0.0);
        }
    };
    minmax([](const PanelRow& r) { return r.population; },
           [](PanelRow& r, double v) { r.population = v; });
    minmax([](const PanelRow& r) { return r.density; },
           [](PanelRow& r, double v) { r.density = v; });
}

} // namespace

Panel build_panel(const std::map<std::string, WeeklyRt>& rt_weekly,
                  const MobilityTable& mobility, const Registry& registry,
                  const std::map<std::string, OnsetRecord>& onsets,
                  const PanelConfig& config) {
    Panel panel;
    std::set<std::string> regions_seen;

    for (const auto& [region_id, weekly] : rt_weekly) {
        const Region& region = registry.at(region_id);

        Date window_start{1970, 1, 1}, window_end{2999, 12, 31};
        if (config.wave == Wave::First) {
            auto it = onsets.find(region_id);
            if (it == onsets.end() || !it->second.reached) continue;
            window_start = Date{2020, 1, 1}.plus_days(it->second.onset_day);
            window_end = window_start.plus_days(config.onset_window_days - 1);
        }

        for (size_t i = 0; i < weekly.series.size(); ++i) {
            const IsoWeek& week = weekly.series.weeks[i];
            Date monday = week.start_date();
            if (config.wave == Wave::First) {
                Date sunday = monday.plus_days(6);
                if (sunday < window_start || window_end < monday) continue;
            } else {
                if (!(config.second_wave_after < monday)) continue;
            }
            if (!config.include_censored && weekly.censored[i]) {
                ++panel.dropped_missing;
                continue;
            }

            const auto* internal = mobility.find(region_id, MobilityType::Internal, week);
            const auto* inbound = mobility.find(region_id, MobilityType::Inbound, week);
            const auto* outbound = mobility.find(region_id, MobilityType::Outbound, week);
            bool ok = internal && inbound && outbound && internal->has_normalized &&
                      inbound->has_normalized && outbound->has_normalized &&
                      internal->has_per_capita;
            if (!ok) {
                ++panel.dropped_missing;
                continue;
            }

            PanelRow row;
            row.region_id = region_id;
            row.country = region.country;
            row.week = week;
            row.rt = weekly.series.values[i];
            row.intermediate = region.typology == Typology::Intermediate ? 1.0 : 0.0;
            row.rural = region.typology == Typology::Rural ? 1.0 : 0.0;
            row.internal = internal->normalized;
            row.inbound = inbound->normalized;
            row.outbound = outbound->normalized;
            row.internal_pca = internal->per_capita_norm;
            row.population = region.population;
            row.density = region.density;
            panel.rows.push_back(std::move(row));
            regions_seen.insert(region_id);
        }
    }

    if (panel.rows.empty()) {
        throw input_error(config.wave == Wave::First
                              ? "panel is empty: no region-week passed the first-wave "
                                "onset-window filter with complete Rt and mobility"
                              : "panel is empty: no region-week passed the second-wave "
                                "cutoff filter with complete Rt and mobility");
    }

    transform_in_place(panel.rows, config.pop_transform);
    panel.n_regions = regions_seen.size();
    return panel;
}

int significance_stars(double p_value) {
    if (p_value < 0.01) return 3;
    if (p_value < 0.05) return 2;
    if (p_value < 0.1) return 1;
    return 0;
}

const Coefficient* RegressionResult::find(const std::string& name) const {
    for (const auto& c : coefficients) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

RegressionResult ols_fit(const Panel& panel, const std::vector<std::string>& regressors,
                         const OlsOptions& options) {
    const size_t n = panel.rows.size();
    if (n == 0) {
        throw input_error("ols_fit: empty panel");
    }

    std::vector<std::string> names;
    names.push_back("(intercept)");
    for (const auto& r : regressors) names.push_back(r);

    std::vector<std::string> countries;
    {
        std::set<std::string> seen;
        for (const auto& row : panel.rows) seen.insert(row.country);
        countries.assign(seen.begin(), seen.end());
    }
    size_t n_fe = 0;
    if (options.country_fixed_effects && countries.size() > 1) {
        n_fe = countries.size() - 1; // first country is the reference level
        for (size_t i = 1; i < countries.size(); ++i) {
            names.push_back("country:" + countries[i]);
        }
    }

    const size_t p = names.size();
    if (n <= p) {
        throw input_error("ols_fit: " + std::to_string(n) + " observations for " +
                          std::to_string(p) + " parameters");
    }

    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(long(n), long(p));
    Eigen::VectorXd y = Eigen::VectorXd::Zero(long(n));
    for (size_t i = 0; i < n; ++i) {
        const PanelRow& row = panel.rows[i];
        X(long(i), 0) = 1.0;
        for (size_t k = 0; k < regressors.size(); ++k) {
            X(long(i), long(k + 1)) = panel_field(row, regressors[k]);
        }
        if (n_fe > 0) {
            auto it = std::lower_bound(countries.begin(), countries.end(), row.country);
            size_t idx = size_t(it - countries.begin());
            if (idx > 0) X(long(i), long(regressors.size() + idx)) = 1.0;
        }
        y(long(i)) = row.rt;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (size_t(qr.rank()) < p) {
        // The trailing pivots are the columns eliminated as dependent.
        auto perm = qr.colsPermutation().indices();
        std::string cols;
        for (long i = qr.rank(); i < long(p); ++i) {
            cols += (cols.empty() ? "" : ", ") + names[size_t(perm(i))];
        }
        throw computation_error("ols_fit: design matrix is rank deficient; collinear "
                                "column candidates: " + cols);
    }

    Eigen::VectorXd beta = qr.solve(y);
    Eigen::VectorXd resid = y - X * beta;
    double rss = resid.squaredNorm();
    double dof = double(n) - double(p);
    double sigma2 = rss / dof;

    // (X'X)^-1 from the pivoted QR factors.
    Eigen::MatrixXd rinv = qr.matrixR()
                               .topLeftCorner(long(p), long(p))
                               .triangularView<Eigen::Upper>()
                               .solve(Eigen::MatrixXd::Identity(long(p), long(p)));
    Eigen::MatrixXd xtx_inv =
        qr.colsPermutation() * (rinv * rinv.transpose()) * qr.colsPermutation().transpose();

    Eigen::MatrixXd cov;
    if (options.robust_se) {
        Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(long(p), long(p));
        for (long i = 0; i < long(n); ++i) {
            meat += resid(i) * resid(i) * X.row(i).transpose() * X.row(i);
        }
        cov = xtx_inv * meat * xtx_inv * (double(n) / dof); // HC1
    } else {
        cov = sigma2 * xtx_inv;
    }

    boost::math::students_t tdist(dof);
    RegressionResult result;
    result.spec_id = options.spec_id;
    result.n_observations = n;
    result.fixed_effect_levels = options.country_fixed_effects ? int(countries.size()) : 0;
    for (size_t k = 0; k < p; ++k) {
        Coefficient c;
        c.name = names[k];
        c.estimate = beta(long(k));
        c.se = std::sqrt(std::max(0.0, cov(long(k), long(k))));
        c.t = c.se > 0 ? c.estimate / c.se : 0.0;
        c.p = c.se > 0 ? 2.0 * boost::math::cdf(tdist, -std::abs(c.t)) : 0.0;
        c.stars = significance_stars(c.p);
        c.fixed_effect = k > regressors.size();
        result.coefficients.push_back(std::move(c));
    }

    double mean_y = y.mean();
    double tss = (y.array() - mean_y).square().sum();
    result.r_squared = tss > 0 ? 1.0 - rss / tss : 0.0;
    result.adj_r_squared =
        1.0 - (1.0 - result.r_squared) * (double(n) - 1.0) / dof;
    return result;
}

std::vector<std::vector<std::string>> table_formulas() {
    return {
        {"intermediate", "rural"},
        {"internal"},
        {"inbound"},
        {"outbound"},
        {"internal_pca"},
        {"population"},
        {"density"},
        {"intermediate", "rural", "internal"},
        {"intermediate", "rural", "internal", "population", "density"},
    };
}

std::vector<TableColumn> run_table(const Panel& panel, bool robust_se) {
    std::vector<TableColumn> out;
    auto formulas = table_formulas();
    for (size_t i = 0; i < formulas.size(); ++i) {
        TableColumn col;
        col.spec_id = "(" + std::to_string(i + 1) + ")";
        OlsOptions opt;
        opt.robust_se = robust_se;
        opt.spec_id = col.spec_id;
        try {
            col.result = ols_fit(panel, formulas[i], opt);
        } catch (const Error& e) {
            col.error = e.what();
        }
        out.push_back(std::move(col));
    }
    return out;
}

namespace {

std::string stars_text(int stars) {
    return std::string(size_t(stars), '*');
}

std::string fixed(double v, int prec = 3) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(prec);
    os << v;
    return os.str();
}

} // namespace

std::string render_table(const std::vector<TableColumn>& columns, const std::string& title) {
    static const std::vector<std::pair<std::string, std::string>> display = {
        {"intermediate", "Intermediate"}, {"rural", "Rural"},
        {"internal", "Internal"},         {"inbound", "Inbound"},
        {"outbound", "Outbound"},         {"internal_pca", "Internal pca"},
        {"population", "Population"},     {"density", "Population density"},
    };
    const int label_w = 20;
    const int col_w = 12;

    std::ostringstream os;
    os << title << "\n\n";
    os << std::string(size_t(label_w), ' ');
    for (const auto& c : columns) {
        os << std::string(size_t(col_w) - c.spec_id.size(), ' ') << c.spec_id;
    }
    os << "\n" << std::string(size_t(label_w) + columns.size() * size_t(col_w), '-') << "\n";

    auto cell = [&](const std::string& text) {
        std::string t = text.size() > size_t(col_w) - 1 ? text.substr(0, size_t(col_w) - 1) : text;
        return std::string(size_t(col_w) - t.size(), ' ') + t;
    };

    for (const auto& [key, label] : display) {
        bool used = false;
        for (const auto& c : columns) {
            if (c.result && c.result->find(key)) used = true;
        }
        if (!used) continue;
        std::string line1 = label + std::string(size_t(label_w) - label.size(), ' ');
        std::string line2(size_t(label_w), ' ');
        for (const auto& c : columns) {
            const Coefficient* coef = c.result ? c.result->find(key) : nullptr;
            if (coef) {
                line1 += cell(fixed(coef->estimate) + stars_text(coef->stars));
                line2 += cell("(" + fixed(coef->se) + ")");
            } else {
                line1 += cell("");
                line2 += cell("");
            }
        }
        os << line1 << "\n" << line2 << "\n";
    }

    os << std::string(size_t(label_w) + columns.size() * size_t(col_w), '-') << "\n";
    std::string obs = "Observations" + std::string(size_t(label_w) - 12, ' ');
    std::string r2 = "R2" + std::string(size_t(label_w) - 2, ' ');
    std::string ar2 = "Adjusted R2" + std::string(size_t(label_w) - 11, ' ');
    for (const auto& c : columns) {
        obs += cell(c.result ? std::to_string(c.result->n_observations) : "failed");
        r2 += cell(c.result ? fixed(c.result->r_squared, 2) : "");
        ar2 += cell(c.result ? fixed(c.result->adj_r_squared, 2) : "");
    }
    os << obs << "\n" << r2 << "\n" << ar2 << "\n";
    os << "Note: *p<0.1; **p<0.05; ***p<0.01\n";
    return os.str();
}

std::vector<LagShiftPoint> lag_shift_regress(const Panel& panel,
                                             const MobilityTable& mobility,
                                             int min_shift, int max_shift,
                                             std::vector<std::string>* warnings) {
    std::vector<LagShiftPoint> out;
    for (int s = min_shift; s <= max_shift; ++s) {
        Panel shifted;
        shifted.n_regions = panel.n_regions;
        for (const auto& row : panel.rows) {
            const auto* m =
                mobility.find(row.region_id, MobilityType::Internal, row.week.plus_weeks(s));
            if (!m || !m->has_normalized) continue;
            PanelRow r = row;
            r.internal = m->normalized;
            shifted.rows.push_back(std::move(r));
        }
        LagShiftPoint pt;
        pt.shift = s;
        try {
            if (shifted.rows.empty()) {
                throw input_error("no rows after shifting mobility");
            }
            OlsOptions opt;
            opt.spec_id = "shift" + std::to_string(s);
            RegressionResult res = ols_fit(shifted, {"internal"}, opt);
            const Coefficient* c = res.find("internal");
            pt.coefficient = c->estimate;
            pt.se = c->se;
            pt.lower95 = c->estimate - 1.959963984540054 * c->se;
            pt.upper95 = c->estimate + 1.959963984540054 * c->se;
            pt.n_observations = res.n_observations;
            out.push_back(pt);
        } catch (const Error& e) {
            if (warnings) {
                warnings->push_back("lag shift " + std::to_string(s) + " omitted: " + e.what());
            }
        }
    }
    return out;
}

} // namespace epimob
