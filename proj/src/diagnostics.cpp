#include "abk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace abk {

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
    double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double quantile_of(std::vector<double> v, double p) {
    if (v.empty()) throw std::runtime_error("quantile of empty vector");
    std::sort(v.begin(), v.end());
    double pos = p * static_cast<double>(v.size() - 1);
    size_t lo = static_cast<size_t>(pos);
    size_t hi = std::min(lo + 1, v.size() - 1);
    double w = pos - static_cast<double>(lo);
    return (1.0 - w) * v[lo] + w * v[hi];
}

double effective_sample_size(const std::vector<double>& trace) {
    size_t n = trace.size();
    if (n < 10) throw std::runtime_error("effective_sample_size: trace too short");
    double mean = mean_of(trace);

    auto gamma_hat = [&](size_t lag) {
        double s = 0.0;
        for (size_t t = 0; t + lag < n; ++t) s += (trace[t] - mean) * (trace[t + lag] - mean);
        return s / static_cast<double>(n);
    };

    double g0 = gamma_hat(0);
    if (g0 <= 0.0) return 1.0;

    // Sum of Geyer's positive-monotone pair sequence.
    double var = -g0;
    double prev_pair = std::numeric_limits<double>::infinity();
    for (size_t m = 0; 2 * m + 1 < n; ++m) {
        double pair = gamma_hat(2 * m) + gamma_hat(2 * m + 1);
        if (pair <= 0.0) break;
        pair = std::min(pair, prev_pair);
        var += 2.0 * pair;
        prev_pair = pair;
    }
    if (var <= 0.0) return 1.0;
    double ess = static_cast<double>(n) * g0 / var;
    return std::min(ess, static_cast<double>(n));
}

double mc_standard_error(const std::vector<double>& trace) {
    double ess = effective_sample_size(trace);
    return sd_of(trace) / std::sqrt(ess);
}

}  // namespace abk
