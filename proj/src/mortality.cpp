#include "epimob/mortality.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "epimob/error.hpp"

namespace epimob {

namespace {

constexpr double kPeriod = 52.0;
constexpr double kDaysPerYear = 365.2425;
constexpr double kZ95 = 1.959963984540054;

/// Cardinal cubic B-spline, support |x| < 2 (knot spacing 1).
double bspline3(double x) {
    x = std::abs(x);
    if (x < 1.0) return (4.0 - 6.0 * x * x + 3.0 * x * x * x) / 6.0;
    if (x < 2.0) {
        double d = 2.0 - x;
        return d * d * d / 6.0;
    }
    return 0.0;
}

double wrap_half_period(double d) {
    while (d > kPeriod / 2) d -= kPeriod;
    while (d < -kPeriod / 2) d += kPeriod;
    return d;
}

double years_at(const IsoWeek& w, double anchor_serial) {
    return (double(w.start_date().serial()) - anchor_serial) / kDaysPerYear;
}

Eigen::RowVectorXd design_row(const BaselineModel& m, const IsoWeek& w) {
    Eigen::RowVectorXd x(int(m.coeffs.size()));
    if (m.fallback) {
        x << 1.0, years_at(w, m.time_anchor);
    } else {
        auto basis = seasonal_basis(week_position(w), m.knots);
        for (int j = 0; j < m.knots; ++j) x(j) = basis[size_t(j)];
        x(m.knots) = years_at(w, m.time_anchor);
    }
    return x;
}

} // namespace

std::vector<double> BaselineConfig::default_lambda_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) {
        grid.push_back(std::pow(10.0, -8.0 + 0.4 * i)); // 1e-8 .. 1e8
    }
    return grid;
}

double week_position(const IsoWeek& w) {
    // Weeks 1..52 -> 0..51; week 53 shares the week-52 position so the
    // sparsely observed 53rd week does not get its own basis region.
    return double(std::min(w.week, 52) - 1);
}

std::vector<double> seasonal_basis(double u, int knots) {
    double h = kPeriod / knots;
    auto out = std::vector<double>(size_t(knots));
    for (int j = 0; j < knots; ++j) {
        out[size_t(j)] = bspline3(wrap_half_period(u - j * h) / h);
    }
    return out;
}

double BaselineModel::seasonal_at(double u) const {
    if (fallback) return intercept;
    auto basis = seasonal_basis(u, knots);
    double v = 0.0;
    for (int j = 0; j < knots; ++j) v += coeffs[size_t(j)] * basis[size_t(j)];
    return v;
}

BaselineModel fit_baseline(const WeeklySeries& history, const BaselineConfig& config) {
    const size_t n = history.size();
    if (n < config.min_weeks) {
        throw input_error("fit_baseline: region '" + history.region_id + "' has " +
                          std::to_string(n) + " weekly observations, needs >= " +
                          std::to_string(config.min_weeks));
    }
    if (config.knots < 5) {
        throw input_error("fit_baseline: need at least 5 spline knots");
    }
    for (double v : history.values) {
        if (v < 0) {
            throw input_error("fit_baseline: negative deaths in history for region '" +
                              history.region_id + "'");
        }
    }

    const int K = config.knots;
    const int p = K + 1;

    BaselineModel m;
    m.region_id = history.region_id;
    m.knots = K;
    m.train_first_year = history.weeks.front().year;
    m.train_last_year = history.weeks.back().year;
    m.train_start = history.weeks.front().start_date();

    double anchor = 0.0;
    for (const auto& w : history.weeks) anchor += double(w.start_date().serial());
    anchor /= double(n);
    m.time_anchor = anchor;

    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd y(n);
    for (size_t i = 0; i < n; ++i) {
        auto basis = seasonal_basis(week_position(history.weeks[i]), K);
        for (int j = 0; j < K; ++j) X(long(i), j) = basis[size_t(j)];
        X(long(i), K) = years_at(history.weeks[i], anchor);
        y(long(i)) = history.values[i];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < p) {
        // Singular seasonal design: intercept + trend only, flagged.
        Eigen::MatrixXd X2(n, 2);
        X2.col(0).setOnes();
        X2.col(1) = X.col(K);
        Eigen::Matrix2d xtx = X2.transpose() * X2;
        Eigen::Vector2d xty = X2.transpose() * y;
        Eigen::Vector2d c = xtx.ldlt().solve(xty);
        Eigen::VectorXd resid = y - X2 * c;
        double rss = resid.squaredNorm();
        double dof = double(n) - 2.0;
        m.fallback = true;
        m.coeffs = {c(0), c(1)};
        m.intercept = c(0);
        m.trend_slope = c(1);
        m.edf = 2.0;
        m.dispersion = dof > 0 ? rss / dof : 0.0;
        Eigen::Matrix2d cov = m.dispersion * xtx.inverse();
        m.cov = {cov(0, 0), cov(0, 1), cov(1, 0), cov(1, 1)};
        return m;
    }

    // Cyclic second-difference penalty on the spline coefficients; the
    // trend column and the seasonal level (constant c) are unpenalized.
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(K, K);
    for (int i = 0; i < K; ++i) {
        D(i, (i + K - 1) % K) += 1.0;
        D(i, i) += -2.0;
        D(i, (i + 1) % K) += 1.0;
    }
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(p, p);
    P.topLeftCorner(K, K) = D.transpose() * D;

    Eigen::MatrixXd xtx = X.transpose() * X;
    Eigen::VectorXd xty = X.transpose() * y;

    double best_gcv = std::numeric_limits<double>::infinity();
    double best_lambda = config.lambda_grid.front();
    Eigen::VectorXd best_c;
    double best_edf = 0.0, best_rss = 0.0;
    Eigen::MatrixXd best_ainv;

    for (double lambda : config.lambda_grid) {
        Eigen::MatrixXd A = xtx + lambda * P;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
        if (ldlt.info() != Eigen::Success) continue;
        Eigen::VectorXd c = ldlt.solve(xty);
        double edf = ldlt.solve(xtx).trace();
        double rss = (y - X * c).squaredNorm();
        double denom = double(n) - edf;
        if (denom <= 0) continue;
        double gcv = double(n) * rss / (denom * denom);
        if (gcv < best_gcv) {
            best_gcv = gcv;
            best_lambda = lambda;
            best_c = c;
            best_edf = edf;
            best_rss = rss;
            best_ainv = ldlt.solve(Eigen::MatrixXd::Identity(p, p));
        }
    }
    if (!best_c.size()) {
        throw computation_error("fit_baseline: penalized solve failed for region '" +
                                history.region_id + "'");
    }

    m.lambda = best_lambda;
    m.edf = best_edf;
    m.dispersion = std::max(0.0, best_rss / (double(n) - best_edf));
    m.coeffs.assign(best_c.data(), best_c.data() + p);

    // Presentation split: the spline basis sums to one, so its mean level
    // acts as the intercept.
    double level = 0.0;
    for (int j = 0; j < K; ++j) level += best_c(j);
    level /= K;
    m.intercept = level;
    m.seasonal_coeffs.resize(size_t(K));
    for (int j = 0; j < K; ++j) m.seasonal_coeffs[size_t(j)] = best_c(j) - level;
    m.trend_slope = best_c(K);

    Eigen::MatrixXd cov = m.dispersion * best_ainv;
    m.cov.resize(size_t(p) * size_t(p));
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) m.cov[size_t(i) * size_t(p) + size_t(j)] = cov(i, j);
    }
    return m;
}

BaselinePrediction predict_baseline(const BaselineModel& model,
                                    const std::vector<IsoWeek>& weeks) {
    const int p = int(model.coeffs.size());
    if (p == 0) {
        throw input_error("predict_baseline: model not fitted");
    }
    Eigen::Map<const Eigen::VectorXd> c(model.coeffs.data(), p);
    Eigen::Map<const Eigen::MatrixXd> cov(model.cov.data(), p, p);

    BaselinePrediction out;
    out.region_id = model.region_id;
    for (const auto& w : weeks) {
        if (w.start_date() < model.train_start) {
            throw input_error("predict_baseline: week " + w.to_string() +
                              " precedes the training span (no backcasting)");
        }
        Eigen::RowVectorXd x = design_row(model, w);
        double mean = x * c;
        double var = x * cov * x.transpose();
        double half = kZ95 * std::sqrt(std::max(0.0, var + model.dispersion));
        out.weeks.push_back(w);
        out.expected.push_back(mean);
        out.lower95.push_back(mean - half);
        out.upper95.push_back(mean + half);
    }
    return out;
}

ExcessSeries excess(const WeeklySeries& observed, const BaselinePrediction& predicted) {
    std::vector<std::string> missing;
    ExcessSeries out;
    out.region_id = observed.region_id;
    for (size_t i = 0; i < observed.size(); ++i) {
        const IsoWeek& w = observed.weeks[i];
        auto it = std::find(predicted.weeks.begin(), predicted.weeks.end(), w);
        if (it == predicted.weeks.end()) {
            missing.push_back(w.to_string());
            continue;
        }
        size_t j = size_t(it - predicted.weeks.begin());
        double obs = observed.values[i];
        double exp = predicted.expected[j];
        double lo = predicted.lower95[j];
        double hi = predicted.upper95[j];
        bool outside = obs > hi || obs < lo;
        out.weeks.push_back(w);
        out.observed.push_back(obs);
        out.expected.push_back(exp);
        out.lower95.push_back(lo);
        out.upper95.push_back(hi);
        out.excess.push_back(outside ? obs - exp : 0.0);
        out.excess_pct.push_back(outside && exp != 0.0 ? 100.0 * (obs - exp) / exp : 0.0);
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& w : missing) list += (list.empty() ? "" : ", ") + w;
        throw input_error("excess: observed weeks missing from the prediction: " + list);
    }
    return out;
}

AggregateExcess aggregate_excess(const std::vector<ExcessSeries>& series,
                                 const Registry& registry) {
    std::vector<IsoWeek> weeks;
    for (const auto& s : series) {
        registry.at(s.region_id);
        weeks.insert(weeks.end(), s.weeks.begin(), s.weeks.end());
    }
    std::sort(weeks.begin(), weeks.end());
    weeks.erase(std::unique(weeks.begin(), weeks.end()), weeks.end());

    AggregateExcess out;
    out.weeks = weeks;
    out.total_excess.assign(weeks.size(), 0.0);

    std::map<std::string, OptSeries> pct;
    for (const auto& s : series) {
        OptSeries row(weeks.size());
        for (size_t i = 0; i < s.weeks.size(); ++i) {
            size_t idx = size_t(std::lower_bound(weeks.begin(), weeks.end(), s.weeks[i]) -
                                weeks.begin());
            out.total_excess[idx] += s.excess[i];
            row[idx] = s.excess_pct[i];
        }
        pct[s.region_id] = std::move(row);
    }
    out.median_excess_pct = group_median(pct, registry);
    return out;
}

} // namespace epimob
