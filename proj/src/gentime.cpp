#include "epimob/gentime.hpp"

#include <cmath>

#include <boost/math/distributions/gamma.hpp>

#include "epimob/error.hpp"

namespace epimob {

double GenerationInterval::discrete_mean() const {
    double m = 0.0;
    for (size_t i = 0; i < pmf.size(); ++i) m += double(i + 1) * pmf[i];
    return m;
}

double GenerationInterval::discrete_sd() const {
    double m = discrete_mean();
    double v = 0.0;
    for (size_t i = 0; i < pmf.size(); ++i) {
        double d = double(i + 1) - m;
        v += d * d * pmf[i];
    }
    return std::sqrt(v);
}

GenerationInterval discretize_gamma(double mean_days, double sd_days, int max_lag) {
    if (!(mean_days > 0) || !(sd_days > 0)) {
        throw input_error("generation interval: mean_days and sd_days must be positive");
    }
    if (max_lag < 2) {
        throw input_error("generation interval: max_lag must be >= 2");
    }

    double shape = (mean_days / sd_days) * (mean_days / sd_days);
    double scale = sd_days * sd_days / mean_days;
    boost::math::gamma_distribution<double> gamma(shape, scale);

    const double required_coverage = 0.999;
    if (boost::math::cdf(gamma, 1.0) >= required_coverage) {
        throw input_error(
            "generation interval: degenerate distribution, >= 99.9% of the mass lies "
            "below lag 1 (mean too small relative to the daily grid)");
    }
    double coverage = boost::math::cdf(gamma, double(max_lag));
    if (coverage < required_coverage) {
        int required = int(std::ceil(boost::math::quantile(gamma, required_coverage)));
        throw input_error("generation interval: max_lag " + std::to_string(max_lag) +
                          " covers only " + std::to_string(coverage * 100.0) +
                          "% of the mass; need max_lag >= " + std::to_string(required));
    }

    GenerationInterval gi;
    gi.mean_days = mean_days;
    gi.sd_days = sd_days;
    gi.pmf.resize(size_t(max_lag));
    double prev_cdf = 0.0; // mass on (0,1] folds into lag 1
    double total = 0.0;
    for (int k = 1; k <= max_lag; ++k) {
        double cdf_k = boost::math::cdf(gamma, double(k));
        gi.pmf[size_t(k - 1)] = cdf_k - prev_cdf;
        total += gi.pmf[size_t(k - 1)];
        prev_cdf = cdf_k;
    }
    for (double& p : gi.pmf) p /= total;
    return gi;
}

} // namespace epimob
