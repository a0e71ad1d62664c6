#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "abk/diagnostics.hpp"
#include "abk/rng.hpp"

using namespace abk;

TEST_CASE("iid trace has ESS near its length") {
    Rng rng(101);
    std::vector<double> x(10000);
    for (double& v : x) v = rng.normal();
    double ess = effective_sample_size(x);
    CHECK(ess > 8000.0);
    CHECK(ess <= 10000.0);
}

TEST_CASE("a constant trace carries one effective sample") {
    std::vector<double> x(500, 3.25);
    CHECK(effective_sample_size(x) == doctest::Approx(1.0));
}

TEST_CASE("AR(1) autocorrelation shrinks the ESS by (1-rho)/(1+rho)") {
    Rng rng(2027);
    double rho = 0.5;
    int n = 100000;
    std::vector<double> x(n);
    x[0] = rng.normal();
    for (int t = 1; t < n; ++t) x[t] = rho * x[t - 1] + std::sqrt(1 - rho * rho) * rng.normal();
    double expected = n * (1 - rho) / (1 + rho);
    CHECK(effective_sample_size(x) == doctest::Approx(expected).epsilon(0.15));
}

TEST_CASE("short traces are rejected") {
    std::vector<double> x(9, 1.0);
    CHECK_THROWS_AS(effective_sample_size(x), std::runtime_error);
}

TEST_CASE("quantiles interpolate and bracket the median") {
    std::vector<double> v{1, 2, 3, 4, 5};
    CHECK(quantile_of(v, 0.5) == 3.0);
    CHECK(quantile_of(v, 0.0) == 1.0);
    CHECK(quantile_of(v, 1.0) == 5.0);
    CHECK(quantile_of(v, 0.25) == 2.0);
    CHECK(quantile_of(v, 0.625) == doctest::Approx(3.5));
}

TEST_CASE("mc standard error scales with autocorrelation") {
    Rng rng(7);
    std::vector<double> x(20000);
    for (double& v : x) v = rng.normal();
    // For iid standard normals the MC-SE approaches 1/sqrt(n).
    CHECK(mc_standard_error(x) == doctest::Approx(1.0 / std::sqrt(20000.0)).epsilon(0.2));
}
