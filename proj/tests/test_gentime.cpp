#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "epimob/error.hpp"
#include "epimob/gentime.hpp"

using namespace epimob;

namespace {

// Independent oracle: composite-Simpson integration of the gamma density
// (via lgamma) over (k-1, k], normalized over 1..max_lag.
std::vector<double> quadrature_pmf(double mean, double sd, int max_lag) {
    double shape = (mean / sd) * (mean / sd);
    double scale = sd * sd / mean;
    auto density = [&](double x) {
        if (x <= 0) return 0.0;
        double log_pdf = (shape - 1) * std::log(x) - x / scale - std::lgamma(shape) -
                         shape * std::log(scale);
        return std::exp(log_pdf);
    };
    auto pmf = std::vector<double>(size_t(max_lag));
    const int steps = 2000;
    for (int k = 1; k <= max_lag; ++k) {
        double a = k - 1.0, b = double(k);
        double h = (b - a) / steps;
        double sum = density(a) + density(b);
        for (int i = 1; i < steps; ++i) {
            sum += density(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
        }
        pmf[size_t(k - 1)] = sum * h / 3.0;
    }
    double total = 0.0;
    for (double p : pmf) total += p;
    for (double& p : pmf) p /= total;
    return pmf;
}

} // namespace

TEST_CASE("discretize_gamma matches the quadrature oracle") {
    GenerationInterval gi = discretize_gamma(4.0, 2.0, 21);
    auto oracle = quadrature_pmf(4.0, 2.0, 21);
    REQUIRE(gi.pmf.size() == oracle.size());
    for (size_t i = 0; i < oracle.size(); ++i) {
        CHECK(gi.pmf[i] == doctest::Approx(oracle[i]).epsilon(1e-7));
    }

    double sum = 0.0;
    for (double p : gi.pmf) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

    // Mode at lag 3 or 4 (continuous mode is (shape-1)*scale = 3).
    size_t mode = 0;
    for (size_t i = 1; i < gi.pmf.size(); ++i) {
        if (gi.pmf[i] > gi.pmf[mode]) mode = i;
    }
    int mode_lag = int(mode) + 1;
    CHECK((mode_lag == 3 || mode_lag == 4));

    CHECK(std::abs(gi.discrete_mean() - 4.0) < 0.5);
    CHECK(std::abs(gi.discrete_sd() - 2.0) < 0.5);
}

TEST_CASE("degenerate mass below lag 1 is rejected") {
    CHECK_THROWS_AS(discretize_gamma(1e-6, 1e-6, 21), Error);
    CHECK_THROWS_AS(discretize_gamma(-1.0, 2.0, 21), Error);
    CHECK_THROWS_AS(discretize_gamma(4.0, 0.0, 21), Error);
    CHECK_THROWS_AS(discretize_gamma(4.0, 2.0, 1), Error);
}

TEST_CASE("insufficient max_lag reports the required lag") {
    // mean 10, sd 3: the 99.9% quantile sits near 21, far above max_lag 12.
    CHECK_THROWS_WITH_AS(discretize_gamma(10.0, 3.0, 12), doctest::Contains("max_lag"),
                         Error);
    try {
        discretize_gamma(10.0, 3.0, 12);
    } catch (const Error& e) {
        std::string msg = e.what();
        auto pos = msg.find(">=");
        REQUIRE(pos != std::string::npos);
        int required = std::stoi(msg.substr(pos + 2));
        CHECK(required > 12);
        CHECK_NOTHROW(discretize_gamma(10.0, 3.0, required));
    }
}

TEST_CASE("doubling an already sufficient max_lag barely changes the pmf") {
    GenerationInterval a = discretize_gamma(4.0, 2.0, 21);
    GenerationInterval b = discretize_gamma(4.0, 2.0, 42);
    for (size_t i = 0; i < a.pmf.size(); ++i) {
        CHECK(std::abs(a.pmf[i] - b.pmf[i]) < 1e-6);
    }
}

TEST_CASE("normalization and tail decay across random parameters") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> mean_dist(2.5, 10.0);
    std::uniform_real_distribution<double> ratio_dist(0.35, 0.65);
    for (int trial = 0; trial < 50; ++trial) {
        double mean = mean_dist(rng);
        double sd = ratio_dist(rng) * mean;
        int max_lag = int(std::ceil(mean + 8 * sd)) + 2;
        GenerationInterval gi = discretize_gamma(mean, sd, max_lag);

        double sum = 0.0;
        for (double p : gi.pmf) {
            CHECK(p >= 0.0);
            sum += p;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

        // Monotone, vanishing tail beyond mean + 6 sd.
        int tail_start = int(std::ceil(mean + 6 * sd));
        for (int k = tail_start; k < gi.max_lag(); ++k) {
            CHECK(gi.w(k + 1) <= gi.w(k));
        }
        CHECK(gi.w(tail_start) < 1e-3);
        CHECK(gi.w(gi.max_lag()) < 1e-5);

        // Moment consistency; the ceil-grid offset is 0.5 in the smooth
        // limit, so the randomized bound allows the quantization wobble.
        CHECK(std::abs(gi.discrete_mean() - mean) <= 0.51);
        CHECK(std::abs(gi.discrete_sd() - sd) <= 0.51);

        CHECK(gi.w(0) == 0.0); // lag 0 structurally absent
        CHECK(gi.w(-3) == 0.0);
        CHECK(gi.w(gi.max_lag() + 1) == 0.0);
    }
}
