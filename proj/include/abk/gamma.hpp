#ifndef ABK_GAMMA_HPP
#define ABK_GAMMA_HPP

#include "abk/rng.hpp"

namespace abk {

// Gamma distribution parameterised by mean and standard deviation.
// Moment matching: shape = (mean/sd)^2, scale = sd^2/mean.
struct GammaSpec {
    double mean = 0.0;
    double sd = 0.0;
    double shape = 0.0;
    double scale = 0.0;

    double pdf(double x) const;
    double log_pdf(double x) const;  // -inf outside (0, inf)
    double sample(Rng& rng) const { return rng.gamma(shape, scale); }
};

GammaSpec gamma_from_mean_sd(double mean, double sd);

}  // namespace abk

#endif
