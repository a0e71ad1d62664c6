#include "abk/priors.hpp"

#include <cmath>
#include <stdexcept>

namespace abk {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double PriorSpec::log_prior_rate(double x) const {
    if (!(x > 0.0) || !rate_trunc.contains(x)) return kNegInf;
    return rate_prior.log_pdf(x);
}

double PriorSpec::log_prior_v(double x) const {
    return (x > 0.0 && x < 1.0 && v_trunc.contains(x)) ? 0.0 : kNegInf;
}

double PriorSpec::log_prior_b(double x) const {
    return (x > 0.0 && b_trunc.contains(x)) ? 0.0 : kNegInf;
}

double PriorSpec::log_prior_tq(double x) const {
    return (x > 0.0 && tq_trunc.contains(x)) ? 0.0 : kNegInf;
}

double PriorSpec::sample_rate(Rng& rng) const {
    if (!rate_trunc.bounded()) {
        return rate_prior.sample(rng);
    }
    // Inverse CDF of the x^(shape-1) factor on [lo, hi], followed by one
    // rejection step on exp(-x/scale). With the vague prior the exponential
    // factor is essentially 1 over any sane window.
    double lo = std::max(rate_trunc.lo, 1e-300), hi = rate_trunc.hi;
    double k = rate_prior.shape;
    for (;;) {
        double u = rng.uniform();
        double x = std::pow(std::pow(lo, k) + u * (std::pow(hi, k) - std::pow(lo, k)), 1.0 / k);
        if (rng.uniform() < std::exp(-(x - lo) / rate_prior.scale)) return x;
    }
}

double PriorSpec::sample_v(Rng& rng) const {
    return rng.uniform(std::max(0.0, v_trunc.lo), std::min(1.0, v_trunc.hi));
}

double PriorSpec::sample_b(Rng& rng) const {
    if (!b_trunc.bounded()) throw std::runtime_error("cannot sample from an unbounded flat prior for b");
    return rng.uniform(b_trunc.lo, b_trunc.hi);
}

double PriorSpec::sample_tq(Rng& rng) const {
    if (!tq_trunc.bounded()) throw std::runtime_error("cannot sample from an unbounded flat prior for t_q");
    return rng.uniform(tq_trunc.lo, tq_trunc.hi);
}

}  // namespace abk
