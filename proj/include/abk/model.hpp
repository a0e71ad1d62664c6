#ifndef ABK_MODEL_HPP
#define ABK_MODEL_HPP

#include <limits>
#include <vector>

#include "abk/gamma.hpp"

namespace abk {

// Fixed-known gamma stage durations (mean, sd in days).
struct StageDurations {
    GammaSpec incubation = gamma_from_mean_sd(11.6, 1.9);
    GammaSpec fever = gamma_from_mean_sd(2.49, 0.88);
    GammaSpec rash = gamma_from_mean_sd(16.0, 2.83);
    GammaSpec quarantine_delay = gamma_from_mean_sd(2.0, 2.00);
};

// The six inferred parameters plus the index case. The index exposure time
// lives with the augmented event times (events.e[kappa]).
struct ModelParams {
    double lambda_a = 0.0;  // population-wide contact rate, per day
    double lambda_f = 0.0;  // FTC-to-FTC contact rate, per day
    double lambda_h = 0.0;  // within-compound same-confession rate, per day
    double v = 0.0;         // vaccine efficacy, probability of full protection
    double b = 0.0;         // fever-period infectivity multiplier
    double t_q = 0.0;       // day quarantine measures begin
    int kappa = 0;          // index case id
};

// Per-case event times; r is observed, the rest are augmented.
struct AugmentedEvents {
    std::vector<double> e, i, r, tau, q;

    int n_cases() const { return static_cast<int>(r.size()); }
    double infectious_end(int j) const { return std::min(tau[j], q[j]); }

    // e < i < r < tau per case and q > r per case; e[kappa] minimal.
    bool ordering_ok(int kappa) const;
};

// T: end of observation, the final rash time.
double end_time(const std::vector<double>& rash_times);

// m(k,t): 0 before fever, b during fever, 1 during rash until removal or
// quarantine, 0 afterwards.
double infectivity_multiplier(int k, double t, double b, const AugmentedEvents& ev);

// Left limit m(k,t-), used for pressure at an exposure instant.
double infectivity_multiplier_left(int k, double t, double b, const AugmentedEvents& ev);

}  // namespace abk

#endif
