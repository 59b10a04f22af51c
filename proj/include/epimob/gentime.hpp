#pragma once

#include <vector>

namespace epimob {

/// Discrete generation-interval distribution over integer day lags
/// 1..max_lag. Lag 0 is structurally absent: no same-day transmission, so
/// the case-pair attribution denominator never self-attributes.
struct GenerationInterval {
    std::vector<double> pmf; // pmf[i] = weight of lag i+1
    double mean_days = 0.0;  // requested continuous parameters
    double sd_days = 0.0;

    int max_lag() const { return int(pmf.size()); }

    /// Weight of an integer lag; 0 outside 1..max_lag.
    double w(int lag) const {
        if (lag < 1 || lag > max_lag()) return 0.0;
        return pmf[size_t(lag - 1)];
    }

    double discrete_mean() const;
    double discrete_sd() const;
};

/// Discretizes a gamma distribution with the given mean and sd
/// (method-of-moments shape/scale) by assigning lag k the continuous mass
/// on (k-1, k], then renormalizing. max_lag must cover >= 99.9% of the
/// continuous mass; the error reports the required lag otherwise.
GenerationInterval discretize_gamma(double mean_days, double sd_days, int max_lag);

} // namespace epimob
